#include "wm/cli.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wm/experiments.hpp"
#include "wm/markov.hpp"
#include "wm/model.hpp"
#include "wm/structure.hpp"
#include "wm/tracking.hpp"

namespace wm {

namespace {

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

WeakModel load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot read file " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_model(ss.str());
}

std::vector<int> parse_color_list(const WeakModel& m, const std::string& text) {
  std::vector<int> colors;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, ',')) {
    if (cur.empty()) throw Error("empty color in list '" + text + "'");
    colors.push_back(m.color_index(cur));
  }
  if (colors.empty()) throw Error("empty color list");
  return colors;
}

std::string join_nodes(const WeakModel& m, const std::vector<int>& seq) {
  std::string s;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ",";
    s += m.nodes[seq[i]];
  }
  return s;
}

std::string join_colors(const WeakModel& m, const std::vector<int>& seq) {
  std::string s;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ",";
    s += m.colors[seq[i]];
  }
  return s;
}

void cmd_analyze(const std::string& path, bool machine, std::ostream& out) {
  WeakModel m = load_model(path);
  NodeClassification cls = classify_nodes(m);
  TrackabilityReport tr = classify_trackability(m);
  BoundReport bound = hypothesis_bound(m);

  if (machine) {
    out << "nodes=" << m.node_count() << "\n";
    out << "colors=" << m.color_count() << "\n";
    out << "edges=" << m.edge_count() << "\n";
    out << "single_colored=" << (m.is_single_colored() ? "true" : "false") << "\n";
    out << "strongly_connected=" << (cls.strongly_connected ? "true" : "false") << "\n";
    out << "recurrent_classes=" << cls.recurrent_classes.size() << "\n";
    for (size_t i = 0; i < cls.recurrent_classes.size(); ++i) {
      out << "recurrent_class_" << i << "=" << join_nodes(m, cls.recurrent_classes[i]) << "\n";
      out << "period_" << i << "=" << cls.periods[i] << "\n";
    }
    out << "transient=" << join_nodes(m, cls.transient) << "\n";
    out << "regime=" << to_string(tr.regime) << "\n";
    if (tr.intersecting) {
      out << "witness_cycle_a=" << join_nodes(m, tr.intersecting->cycle_a) << "\n";
      out << "witness_cycle_b=" << join_nodes(m, tr.intersecting->cycle_b) << "\n";
    }
    if (tr.fork) {
      out << "fork_cycle_a=" << join_nodes(m, tr.fork->cycle_a) << "\n";
      out << "fork_path=" << join_nodes(m, tr.fork->path) << "\n";
      out << "fork_cycle_b=" << join_nodes(m, tr.fork->cycle_b) << "\n";
    }
    out << "K=" << bound.K << "\n";
    for (size_t v = 0; v < bound.M.size(); ++v)
      out << "M_" << m.nodes[v] << "=" << bound.M[v] << "\n";
    out << "bound_known_start=" << bound.bound_known_start << "\n";
    out << "bound_unknown_start=" << bound.bound_unknown_start << "\n";
    out << "bound_valid=" << (bound.valid ? "true" : "false") << "\n";
  } else {
    out << "nodes: " << m.node_count() << ", colors: " << m.color_count() << ", edges: "
        << m.edge_count() << (m.is_single_colored() ? "" : " (multi-colored)") << "\n";
    out << "strongly connected: " << (cls.strongly_connected ? "yes" : "no") << "\n";
    for (size_t i = 0; i < cls.recurrent_classes.size(); ++i)
      out << "recurrent class " << i << " (period " << cls.periods[i]
          << "): " << join_nodes(m, cls.recurrent_classes[i]) << "\n";
    out << "transient nodes: "
        << (cls.transient.empty() ? std::string("none") : join_nodes(m, cls.transient)) << "\n";
    out << "regime: " << to_string(tr.regime) << "\n";
    if (tr.intersecting) {
      out << "witness cycle a: " << join_nodes(m, tr.intersecting->cycle_a) << "\n";
      out << "witness cycle b: " << join_nodes(m, tr.intersecting->cycle_b) << "\n";
    }
    if (tr.fork) {
      out << "fork cycle a: " << join_nodes(m, tr.fork->cycle_a) << "\n";
      out << "fork path: " << join_nodes(m, tr.fork->path) << "\n";
      out << "fork cycle b: " << join_nodes(m, tr.fork->cycle_b) << "\n";
    }
    out << "K: " << bound.K << "\nM:";
    for (size_t v = 0; v < bound.M.size(); ++v) out << " " << m.nodes[v] << "=" << bound.M[v];
    out << "\n";
    out << "bound known start: " << bound.bound_known_start << "\n";
    out << "bound unknown start: " << bound.bound_unknown_start << "\n";
    out << "bound valid: " << (bound.valid ? "yes" : "no") << "\n";
  }

  std::string aut = "skipped";
  if (m.node_count() <= 12) aut = std::to_string(automorphism_count(m).count);
  out << (machine ? "automorphisms=" : "automorphisms: ") << aut << "\n";
}

void cmd_transform(const std::string& path, const std::string& out_path, std::ostream& out) {
  WeakModel m = load_model(path);
  auto [derived, mapping] = to_single_colored(m);
  (void)mapping;
  std::string text = serialize_model(derived);
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw Error("cannot open " + out_path + " for writing");
  f << text;
  if (!f.good()) throw Error("write to " + out_path + " failed");
}

void cmd_track(const std::string& path, const std::string& colors_text, const std::string& start,
               long long enumerate_cap, std::ostream& out) {
  WeakModel m = load_model(path);
  std::vector<int> colors = parse_color_list(m, colors_text);
  std::optional<int> s;
  if (!start.empty()) s = m.node_index(start);
  if (enumerate_cap < 0) {
    out << "count=" << hypothesis_count(m, colors, s) << "\n";
    return;
  }
  Enumeration e = enumerate_hypotheses(m, colors, static_cast<size_t>(enumerate_cap), s);
  out << "count=" << e.total << "\n";
  out << "truncated=" << (e.truncated ? "true" : "false") << "\n";
  for (size_t i = 0; i < e.sequences.size(); ++i)
    out << "hypothesis_" << i << "=" << join_nodes(m, e.sequences[i]) << "\n";
}

void cmd_growth(const std::string& path, int t_max, std::ostream& out) {
  WeakModel m = load_model(path);
  GrowthProfile p = worst_case_growth(m, t_max);
  for (int t = 1; t <= t_max; ++t) {
    out << "n_" << t << "=" << p.n[t - 1] << "\n";
    out << "witness_" << t << "=" << join_colors(m, p.witnesses[t - 1]) << "\n";
  }
}

void cmd_bound(const std::string& path, std::ostream& out) {
  WeakModel m = load_model(path);
  BoundReport b = hypothesis_bound(m);
  out << "K=" << b.K << "\n";
  std::uint64_t slack = 0;
  for (size_t v = 0; v < b.M.size(); ++v) {
    out << "M_" << m.nodes[v] << "=" << b.M[v] << "\n";
    slack += b.M[v] - 1;
  }
  out << "sum_M_minus_1=" << slack << "\n";
  out << "bound_known_start=" << b.bound_known_start << "\n";
  out << "bound_unknown_start=" << b.bound_unknown_start << "\n";
  out << "strongly_connected=" << (b.strongly_connected ? "true" : "false") << "\n";
  out << "trackable_bounded=" << (b.trackable_bounded ? "true" : "false") << "\n";
  out << "valid=" << (b.valid ? "true" : "false") << "\n";
}

void cmd_mc(const std::string& path, bool absorption, bool stationary,
            const std::string& recurrence, std::ostream& out) {
  WeakModel m = load_model(path);
  MarkovChain chain(std::move(m));
  const WeakModel& cm = chain.model();
  if (!absorption && !stationary && recurrence.empty()) absorption = stationary = true;

  if (absorption) {
    TimingVector abs = mean_absorption_times(chain);
    for (int v = 0; v < chain.n(); ++v)
      out << "absorption_" << cm.nodes[v] << "=" << fmt12(abs.values[v]) << "\n";
    out << "absorption_residual=" << fmt12(abs.residual) << "\n";
  }

  if (stationary) {
    NodeClassification cls = classify_nodes(cm);
    bool defined = cls.recurrent_classes.size() == 1;
    out << "stationary_defined=" << (defined ? "true" : "false") << "\n";
    if (defined) {
      Distribution pi = stationary_distribution(chain);
      for (int v = 0; v < chain.n(); ++v)
        out << "stationary_" << cm.nodes[v] << "=" << fmt12(pi.p[v]) << "\n";
      out << "stationary_residual=" << fmt12(pi.residual) << "\n";
      out << "entropy_rate=" << fmt12(markov_entropy_rate(chain)) << "\n";
    }
  }

  if (!recurrence.empty()) {
    int tv = cm.node_index(recurrence);
    TimingVector fpt = mean_first_passage(chain, tv);
    for (int v = 0; v < chain.n(); ++v)
      out << "fpt_" << cm.nodes[v] << "=" << fmt12(fpt.values[v]) << "\n";
    out << "fpt_residual=" << fmt12(fpt.residual) << "\n";
    out << "t*=" << fmt12(mean_recurrence_time(chain, tv)) << "\n";
  }
}

struct ReconArgs {
  std::string path;
  std::string start;
  int traversals = 10000;
  int steps = 200;
  std::uint64_t seed = 0;
  int beta_max = 100;
  int threads = 1;
  std::string out_path;
};

void cmd_simulate_recon(const ReconArgs& a, std::ostream& out) {
  WeakModel m = load_model(a.path);
  MarkovChain chain(std::move(m));
  ReconstructionConfig cfg;
  cfg.traversals = a.traversals;
  cfg.steps = a.steps;
  cfg.start = chain.model().node_index(a.start);
  cfg.seed = a.seed;
  cfg.beta_max = a.beta_max;
  cfg.threads = a.threads;
  AccuracyCurve curve = run_reconstruction_experiment(chain, cfg);
  out << "traversals=" << cfg.traversals << "\n";
  out << "steps=" << cfg.steps << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "alpha_0=" << fmt12(curve.alpha[0]) << "\n";
  try {
    ExpFit fit = fit_exponential_decay(curve);
    out << "A=" << fmt12(fit.A) << "\n";
    out << "tau=" << fmt12(fit.tau) << "\n";
    out << "rows_used=" << fit.rows_used << "\n";
  } catch (const Error& e) {
    out << "fit_error=" << e.what() << "\n";
  }
  if (!a.out_path.empty()) {
    write_accuracy_csv(curve, a.out_path);
    out << "csv=" << a.out_path << "\n";
  }
}

struct EntropyArgs {
  std::string path;
  std::string start;
  int T = 2000;
  int samples = 200;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_path;
};

void cmd_entropy(const EntropyArgs& a, std::ostream& out) {
  WeakModel m = load_model(a.path);
  MarkovChain chain(std::move(m));
  int start = chain.model().node_index(a.start);
  EntropyEstimate est =
      estimate_conditional_entropy_rate(chain, a.T, a.samples, start, a.seed, a.threads);
  out << "T=" << est.T << "\n";
  out << "n_samples=" << est.n_samples << "\n";
  out << "bits_per_step=" << fmt12(est.bits_per_step) << "\n";
  out << "stderr=" << fmt12(est.stderr_) << "\n";
  out << "y_rate=" << fmt12(est.y_rate) << "\n";
  out << "y_rate_stderr=" << fmt12(est.y_rate_stderr) << "\n";
  out << "x_rate_exact=" << fmt12(est.x_rate_exact) << "\n";
  out << "x_rate_stationary=" << fmt12(est.x_rate_stationary) << "\n";
  out << "cross_check=" << fmt12(est.cross_check) << "\n";
  out << "identity_mean=" << fmt12(est.identity_mean) << "\n";
  out << "identity_stderr=" << fmt12(est.identity_stderr) << "\n";
  if (!a.out_path.empty()) {
    write_entropy_csv(est, a.out_path);
    out << "csv=" << a.out_path << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"weak model analysis toolkit"};
  app.require_subcommand(1);

  std::string a_path;
  bool a_machine = false;
  auto* analyze = app.add_subcommand("analyze", "structure, trackability and bounds report");
  analyze->add_option("model", a_path, "model file")->required();
  analyze->add_flag("--machine", a_machine, "stable key=value output");
  analyze->callback([&]() { cmd_analyze(a_path, a_machine, out); });

  std::string t_path, t_out;
  auto* transform = app.add_subcommand("transform", "split multi-colored nodes per color");
  transform->add_option("model", t_path, "model file")->required();
  transform->add_option("-o,--output", t_out, "write the transformed model to a file");
  transform->callback([&]() { cmd_transform(t_path, t_out, out); });

  std::string tr_path, tr_colors, tr_start;
  long long tr_enum = -1;
  auto* track = app.add_subcommand("track", "hypothesis count for a color sequence");
  track->add_option("model", tr_path, "model file")->required();
  track->add_option("--colors", tr_colors, "comma separated color sequence")->required();
  track->add_option("--start", tr_start, "known start node");
  track->add_option("--enumerate", tr_enum, "list hypotheses, capped at this many");
  track->callback([&]() { cmd_track(tr_path, tr_colors, tr_start, tr_enum, out); });

  std::string g_path;
  int g_tmax = 1;
  auto* growth = app.add_subcommand("growth", "worst-case hypothesis counts by length");
  growth->add_option("model", g_path, "model file")->required();
  growth->add_option("--t-max", g_tmax, "largest sequence length")->required();
  growth->callback([&]() { cmd_growth(g_path, g_tmax, out); });

  std::string b_path;
  auto* bound = app.add_subcommand("bound", "worst-case hypothesis bound report");
  bound->add_option("model", b_path, "model file")->required();
  bound->callback([&]() { cmd_bound(b_path, out); });

  std::string m_path, m_recurrence;
  bool m_absorption = false, m_stationary = false;
  auto* mc = app.add_subcommand("mc", "Markov chain timing quantities");
  mc->add_option("model", m_path, "model file with probabilities")->required();
  mc->add_flag("--absorption", m_absorption, "mean absorption times");
  mc->add_flag("--stationary", m_stationary, "stationary distribution and entropy rate");
  mc->add_option("--recurrence", m_recurrence, "first passage and recurrence target node");
  mc->callback([&]() { cmd_mc(m_path, m_absorption, m_stationary, m_recurrence, out); });

  ReconArgs ra;
  auto* recon = app.add_subcommand("simulate-recon", "reconstruction accuracy experiment");
  recon->add_option("model", ra.path, "model file with probabilities")->required();
  recon->add_option("--start", ra.start, "walk start node")->required();
  recon->add_option("--traversals", ra.traversals, "number of sampled walks");
  recon->add_option("--steps", ra.steps, "walk length");
  recon->add_option("--seed", ra.seed, "base random seed");
  recon->add_option("--beta-max", ra.beta_max, "largest distance from the end");
  recon->add_option("--threads", ra.threads, "worker threads");
  recon->add_option("--out", ra.out_path, "write the accuracy curve to a CSV file");
  recon->callback([&]() { cmd_simulate_recon(ra, out); });

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "conditional entropy rate estimate");
  entropy->add_option("model", ea.path, "model file with probabilities")->required();
  entropy->add_option("--start", ea.start, "walk start node")->required();
  entropy->add_option("--T", ea.T, "walk length");
  entropy->add_option("--samples", ea.samples, "number of sampled walks");
  entropy->add_option("--seed", ea.seed, "base random seed");
  entropy->add_option("--threads", ea.threads, "worker threads");
  entropy->add_option("--out", ea.out_path, "write the estimate to a CSV file");
  entropy->callback([&]() { cmd_entropy(ea, out); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace wm
