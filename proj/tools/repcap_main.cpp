#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>

#include "repcap/io.hpp"
#include "repcap/sims.hpp"

namespace fs = std::filesystem;
using repcap::Json;

namespace {

struct OutputContext {
  std::string subcommand;
  Json resolved_config = Json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;
  std::vector<std::string> output_paths;

  void track_input(const std::string& path) {
    input_digests[path] = repcap::sha256_hex(repcap::read_file_bytes(path));
  }
};

std::string resolve_out(const std::string& out) {
  const char* dir = std::getenv("REPCAP_OUT_DIR");
  if (dir && *dir && !fs::path(out).is_absolute()) return (fs::path(dir) / out).string();
  return out;
}

void write_manifest(const OutputContext& ctx) {
  if (ctx.output_paths.empty()) return;
  Json m;
  m["subcommand"] = ctx.subcommand;
  m["config"] = ctx.resolved_config;
  m["master_seed"] = ctx.seed;
  m["tool_version"] = REPCAP_VERSION;
  m["input_digests"] = ctx.input_digests;
  m["output_paths"] = ctx.output_paths;
  const std::string path = ctx.output_paths.front() + ".manifest.json";
  repcap::write_file_bytes(path, repcap::canonical_json(m) + "\n");
}

// Sanitizes, merges warnings, writes canonically (or prints when no path).
void emit_report(Json report, const std::string& out, OutputContext& ctx) {
  std::vector<std::string> warnings;
  Json clean = repcap::sanitize_json(report, &warnings);
  if (!warnings.empty()) {
    Json w = clean.value("warnings", Json::array());
    for (const auto& msg : warnings) w.push_back(msg);
    clean["warnings"] = w;
  }
  const std::string text = repcap::canonical_json(clean) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    const std::string path = resolve_out(out);
    repcap::write_file_bytes(path, text);
    ctx.output_paths.push_back(path);
  }
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

int run(int argc, char** argv) {
  CLI::App app{"repcap: representation rates, capacity and typicality experiments"};
  app.require_subcommand(1);

  // --- entropy ---
  auto* entropy_cmd = app.add_subcommand("entropy", "Entropy rate of a source");
  std::string entropy_source;
  bool entropy_markov = false;
  std::string entropy_out;
  entropy_cmd->add_option("--source", entropy_source, "Pmf or transition CSV")->required();
  entropy_cmd->add_flag("--markov", entropy_markov, "Treat the file as a transition matrix");
  entropy_cmd->add_option("--out", entropy_out, "Write a JSON report here");

  // --- typical-set ---
  auto* ts_cmd = app.add_subcommand("typical-set", "Enumerate a typical set");
  std::string ts_source, ts_out;
  bool ts_markov = false;
  std::size_t ts_n = 0;
  double ts_eps = 0.1;
  std::uint64_t ts_cap = 1ull << 24;
  ts_cmd->add_option("--source", ts_source, "Pmf or transition CSV")->required();
  ts_cmd->add_flag("--markov", ts_markov, "Treat the file as a transition matrix");
  ts_cmd->add_option("--n", ts_n, "Block length")->required();
  ts_cmd->add_option("--epsilon", ts_eps, "Typicality epsilon");
  ts_cmd->add_option("--out", ts_out, "Member CSV output path")->required();
  ts_cmd->add_option("--cap", ts_cap, "Enumeration cap");

  // --- capacity ---
  auto* cap_cmd = app.add_subcommand("capacity", "Blahut-Arimoto channel capacity");
  std::string cap_channel, cap_cost, cap_out;
  double cap_tol = 1e-9, cap_budget = 0.0;
  cap_cmd->add_option("--channel", cap_channel, "Channel CSV")->required();
  cap_cmd->add_option("--tol", cap_tol, "Bracket tolerance");
  cap_cmd->add_option("--cost", cap_cost, "Cost matrix CSV");
  cap_cmd->add_option("--budget", cap_budget, "Average cost budget");
  cap_cmd->add_option("--out", cap_out, "Write the JSON result here");

  // --- rd-curve ---
  auto* rd_cmd = app.add_subcommand("rd-curve", "Rate-distortion curve");
  std::string rd_source, rd_distortion, rd_out;
  std::size_t rd_points = 33;
  rd_cmd->add_option("--source", rd_source, "Source pmf CSV")->required();
  rd_cmd->add_option("--distortion", rd_distortion, "Distortion CSV (default Hamming)");
  rd_cmd->add_option("--points", rd_points, "Number of curve points");
  rd_cmd->add_option("--out", rd_out, "Curve CSV output path")->required();

  // --- rate ---
  auto* rate_cmd = app.add_subcommand("rate", "Embedding representation rate");
  std::size_t rate_q = 0, rate_bits = 0, rate_n = 0;
  rate_cmd->add_option("--q", rate_q, "Embedding dimension")->required();
  rate_cmd->add_option("--bits", rate_bits, "Bits per coordinate")->required();
  rate_cmd->add_option("--n", rate_n, "Input length")->required();

  // --- audit-support ---
  auto* audit_cmd = app.add_subcommand("audit-support", "Effective support audit");
  std::string audit_embeddings, audit_out;
  audit_cmd->add_option("--embeddings", audit_embeddings, "Embeddings CSV")->required();
  audit_cmd->add_option("--out", audit_out, "Write the JSON audit here");

  // --- collapse-audit ---
  auto* col_cmd = app.add_subcommand("collapse-audit", "Collapse and ETF diagnostics");
  std::string col_embeddings, col_out;
  double col_tol = 1e-6;
  col_cmd->add_option("--embeddings", col_embeddings, "Embeddings CSV")->required();
  col_cmd->add_option("--out", col_out, "Write the JSON report here");
  col_cmd->add_option("--tol", col_tol, "Collapse tolerance (relative)");

  // --- simulate ---
  auto* sim_cmd = app.add_subcommand("simulate", "Run a theorem experiment");
  std::string sim_theorem, sim_config, sim_out, sim_csv, sim_format = "json";
  std::size_t sim_workers = 0;
  bool sim_seed_set = false;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_option("theorem", sim_theorem, "thm3|thm4|thm5|thm6|thm7")->required();
  sim_cmd->add_option("--config", sim_config, "Experiment config JSON")->required();
  sim_cmd->add_option("--out", sim_out, "Report output path");
  sim_cmd->add_option("--csv", sim_csv, "Plot-ready curve CSV output path");
  sim_cmd->add_option("--format", sim_format, "Primary output format")
      ->check(CLI::IsMember({"json", "csv"}));
  sim_cmd->add_option("--workers", sim_workers, "Worker threads (0 = hardware)");
  sim_cmd->add_option("--seed", sim_seed, "Override the config seed");
  std::size_t sim_trials = 0, sim_n = 0;
  double sim_eps = 0.0;
  sim_cmd->add_option("--trials", sim_trials, "Override the config trial count");
  sim_cmd->add_option("--n", sim_n, "Override the config block length");
  sim_cmd->add_option("--epsilon", sim_eps, "Override the config epsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n"
              << "usage: repcap {entropy|typical-set|capacity|rd-curve|rate|audit-support|"
                 "collapse-audit|simulate} [options] (see 'repcap <subcommand> --help')\n";
    return 2;
  }
  sim_seed_set = sim_cmd->count("--seed") > 0;

  OutputContext ctx;

  if (entropy_cmd->parsed()) {
    ctx.subcommand = "entropy";
    ctx.track_input(entropy_source);
    std::unique_ptr<repcap::Source> src;
    if (entropy_markov)
      src = std::make_unique<repcap::MarkovSource>(repcap::read_markov_csv(entropy_source));
    else
      src = std::make_unique<repcap::IidSource>(repcap::read_pmf_csv(entropy_source));
    const double h = src->entropy_rate();
    std::cout << csv_number(h) << "\n";
    ctx.resolved_config = {{"source", entropy_source}, {"markov", entropy_markov}};
    if (!entropy_out.empty()) {
      Json rep = {{"entropy_rate_bits", h}, {"markov", entropy_markov}};
      emit_report(rep, entropy_out, ctx);
    }
    write_manifest(ctx);
    return 0;
  }

  if (ts_cmd->parsed()) {
    ctx.subcommand = "typical-set";
    ctx.track_input(ts_source);
    std::unique_ptr<repcap::Source> src;
    if (ts_markov)
      src = std::make_unique<repcap::MarkovSource>(repcap::read_markov_csv(ts_source));
    else
      src = std::make_unique<repcap::IidSource>(repcap::read_pmf_csv(ts_source));
    const repcap::TypicalSet set = repcap::enumerate_typical_set(*src, ts_n, ts_eps, ts_cap);

    std::string csv = "sequence,log2_prob\n";
    for (const auto& m : set.members) {
      const repcap::Symbols s =
          repcap::unpack_sequence(m.code, ts_n, src->alphabet().size());
      std::string seq;
      for (auto v : s) seq += src->alphabet().symbol(v);
      csv += seq + "," + csv_number(m.log2_prob) + "\n";
    }
    const std::string out_path = resolve_out(ts_out);
    repcap::write_file_bytes(out_path, csv);
    ctx.output_paths.push_back(out_path);

    Json summary = {{"size", set.members.size()},
                    {"mass", set.total_prob},
                    {"entropy_rate", set.source_entropy_rate},
                    {"n", ts_n},
                    {"epsilon", ts_eps},
                    {"bounds",
                     {{"prob_lower", set.prob_lower_ok()},
                      {"prob_upper", set.prob_upper_ok()},
                      {"size_upper", set.size_upper_ok()},
                      {"size_lower_asymptotic", set.size_lower_ok()},
                      {"mass_lower_asymptotic", set.mass_lower_ok()}}}};
    emit_report(summary, fs::path(out_path).replace_extension(".summary.json").string(), ctx);
    ctx.resolved_config = {{"source", ts_source},
                           {"markov", ts_markov},
                           {"n", ts_n},
                           {"epsilon", ts_eps}};
    write_manifest(ctx);
    return 0;
  }

  if (cap_cmd->parsed()) {
    ctx.subcommand = "capacity";
    ctx.track_input(cap_channel);
    const repcap::DiscreteChannel ch = repcap::read_channel_csv(cap_channel);
    const repcap::CapacityResult r = [&] {
      if (cap_cost.empty()) return repcap::blahut_arimoto_capacity(ch, cap_tol);
      ctx.track_input(cap_cost);
      const repcap::DistortionMeasure cost = repcap::read_distortion_csv(cap_cost);
      return repcap::blahut_arimoto_capacity_cost(ch, cost.matrix(), cap_budget, cap_tol);
    }();
    Json rep = {{"capacity_bits", r.capacity_bits},
                {"optimal_input", r.optimal_input.probs()},
                {"iterations", r.iterations},
                {"residual", r.residual},
                {"achieved_cost", r.achieved_cost},
                {"multiplier", r.multiplier}};
    ctx.resolved_config = {{"channel", cap_channel}, {"tol", cap_tol},
                           {"cost", cap_cost}, {"budget", cap_budget}};
    emit_report(rep, cap_out, ctx);
    write_manifest(ctx);
    return 0;
  }

  if (rd_cmd->parsed()) {
    ctx.subcommand = "rd-curve";
    ctx.track_input(rd_source);
    const repcap::Pmf src = repcap::read_pmf_csv(rd_source);
    repcap::DistortionMeasure d = rd_distortion.empty()
                                      ? repcap::DistortionMeasure::hamming(src.alphabet())
                                      : repcap::read_distortion_csv(rd_distortion);
    if (!rd_distortion.empty()) ctx.track_input(rd_distortion);
    const auto curve = repcap::rd_curve(src, d, rd_points);
    std::string csv = "distortion,rate,slope\n";
    for (const auto& p : curve)
      csv += csv_number(p.distortion) + "," + csv_number(p.rate) + "," +
             csv_number(p.slope) + "\n";
    const std::string out_path = resolve_out(rd_out);
    repcap::write_file_bytes(out_path, csv);
    ctx.output_paths.push_back(out_path);
    ctx.resolved_config = {{"source", rd_source},
                           {"distortion", rd_distortion},
                           {"points", rd_points}};
    write_manifest(ctx);
    return 0;
  }

  if (rate_cmd->parsed()) {
    const double r = repcap::representation_rate(
        repcap::EmbeddingSpace(rate_q, rate_bits), rate_n);
    std::cout << csv_number(r) << "\n";
    return 0;
  }

  if (audit_cmd->parsed()) {
    ctx.subcommand = "audit-support";
    ctx.track_input(audit_embeddings);
    const repcap::LabeledEmbeddings data = repcap::read_embeddings_csv(audit_embeddings);
    std::vector<std::vector<double>> zs;
    zs.reserve(data.rows.size());
    for (const auto& row : data.rows) zs.push_back(row.embedding);
    const repcap::SupportAudit a = repcap::effective_support_audit(zs);
    Json rep = {{"distinct_nonzero_count", a.distinct_nonzero_count},
                {"q_tilde", a.q_tilde},
                {"rows", data.rows.size()},
                {"q", data.q}};
    ctx.resolved_config = {{"embeddings", audit_embeddings}};
    emit_report(rep, audit_out, ctx);
    write_manifest(ctx);
    return 0;
  }

  if (col_cmd->parsed()) {
    ctx.subcommand = "collapse-audit";
    ctx.track_input(col_embeddings);
    const repcap::LabeledEmbeddings data = repcap::read_embeddings_csv(col_embeddings);
    const repcap::CollapseReport rep = repcap::collapse_report(data, col_tol);
    Json j;
    j["collapse_index"] = rep.collapse_index;
    j["degeneracy_flag"] = rep.degeneracy_flag;
    j["etf_defined"] = rep.etf_defined;
    if (rep.etf_defined) {
      j["etf_residuals"] = {{"mean_sum_norm", rep.etf.mean_sum_norm},
                            {"norm_spread", rep.etf.norm_spread},
                            {"gram_deviation", rep.etf.gram_deviation}};
    }
    Json classes = Json::array();
    for (const auto& c : rep.stats.classes) {
      classes.push_back({{"label", c.label},
                         {"count", c.count},
                         {"within_variance", c.within_variance},
                         {"mean", c.mean}});
    }
    j["classes"] = classes;
    Json degen = Json::array();
    for (const auto& c : rep.degeneracy) {
      degen.push_back({{"label", c.label},
                       {"embedding_spread", c.embedding_spread},
                       {"target_spread", c.target_spread},
                       {"degenerate", c.degenerate}});
    }
    j["degeneracy"] = degen;
    j["total_variance"] = rep.stats.total_variance;
    ctx.resolved_config = {{"embeddings", col_embeddings}, {"tol", col_tol}};
    emit_report(j, col_out, ctx);
    write_manifest(ctx);
    return 0;
  }

  if (sim_cmd->parsed()) {
    ctx.subcommand = "simulate";
    ctx.track_input(sim_config);
    Json cfg = Json::parse(repcap::read_file_bytes(sim_config));
    cfg["theorem"] = sim_theorem;
    if (sim_seed_set) cfg["seed"] = sim_seed;
    if (sim_cmd->count("--trials")) cfg["trials"] = sim_trials;
    if (sim_cmd->count("--n")) cfg["n"] = sim_n;
    if (sim_cmd->count("--epsilon")) cfg["epsilon"] = sim_eps;
    ctx.seed = cfg.value("seed", std::uint64_t{0});
    const Json rep = repcap::run_experiment(cfg, sim_workers);
    ctx.resolved_config = rep.value("config", cfg);

    std::string curve = "rate,value,ci\n";
    if (rep.contains("records")) {
      for (const auto& rec : rep.at("records")) {
        const double rate = rec.value("rate", 0.0);
        double value = 0.0, ci = 0.0;
        if (rec.contains("error_rate")) {
          value = rec.at("error_rate").get<double>();
          ci = rec.value("ci_half_width", 0.0);
        } else if (rec.contains("mean_distortion")) {
          value = rec.at("mean_distortion").get<double>();
          ci = rec.value("distortion_ci_half_width", 0.0);
        }
        curve += csv_number(rate) + "," + csv_number(value) + "," + csv_number(ci) + "\n";
      }
    }
    if (!sim_csv.empty()) {
      const std::string csv_path = resolve_out(sim_csv);
      repcap::write_file_bytes(csv_path, curve);
      ctx.output_paths.push_back(csv_path);
    }
    if (sim_format == "csv") {
      if (sim_out.empty()) {
        std::cout << curve;
      } else {
        const std::string path = resolve_out(sim_out);
        repcap::write_file_bytes(path, curve);
        ctx.output_paths.push_back(path);
      }
    } else {
      emit_report(rep, sim_out, ctx);
    }
    write_manifest(ctx);
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const repcap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
