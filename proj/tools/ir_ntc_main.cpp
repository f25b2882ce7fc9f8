// ir-ntc: command-line front end for the incremental-redundancy feedback
// laboratory. Subcommands: bounds, rcsp, optimize, simulate, recipe.
// Every subcommand accepts --config <file.json>; explicit flags override
// config values.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irntc/channel.hpp"
#include "irntc/chernoff.hpp"
#include "irntc/io.hpp"
#include "irntc/optimizer.hpp"
#include "irntc/rcsp.hpp"
#include "irntc/rcu.hpp"
#include "irntc/recipe.hpp"
#include "irntc/schedule.hpp"
#include "irntc/simulator.hpp"

namespace {

using namespace irntc;
using nlohmann::json;

ChannelSpec parse_channel(const std::string& text) {
  if (!text.empty() && text.front() == '{') return ChannelSpec::from_json(text);
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const double value = std::stod(text.substr(colon + 1));
    if (kind == "bsc") return ChannelSpec::bsc(value);
    if (kind == "awgn") return ChannelSpec::awgn_db(value);
  }
  throw std::invalid_argument(
      "channel: expected bsc:<p>, awgn:<snr_db>, or a JSON object, got '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoi(tok));
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

void emit_table(const CsvTable& table, const std::string& out) {
  if (out == "-") {
    write_csv(table, std::cout);
  } else {
    write_csv(table, out);
    std::cerr << "wrote " << out << "\n";
  }
}

std::string fmt_int(int64_t v) { return std::to_string(v); }

// JSON config merged under the CLI: a value applies only when the
// corresponding flag was not given on the command line. Unknown keys are
// rejected so typos fail loudly.
struct SubConfig {
  CLI::App* sub = nullptr;
  json j;
  std::set<std::string> known;

  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    in >> j;
    if (!j.is_object()) throw std::runtime_error("config: " + path + " is not a JSON object");
  }
  bool given(const std::string& flag) const { return sub->get_option(flag)->count() > 0; }
  template <class T>
  void merge(const std::string& flag, const std::string& key, T& var) {
    known.insert(key);
    if (j.is_null() || given(flag)) return;
    if (auto it = j.find(key); it != j.end()) var = it->get<T>();
  }
  // "channel" may be a JSON object or the same shorthand string as the flag.
  void merge_channel(std::string& var) {
    known.insert("channel");
    if (j.is_null() || given("--channel")) return;
    if (auto it = j.find("channel"); it != j.end())
      var = it->is_string() ? it->get<std::string>() : it->dump();
  }
  void reject_unknown() const {
    if (j.is_null()) return;
    for (const auto& item : j.items())
      if (!known.count(item.key()))
        throw std::runtime_error("config: unknown key '" + item.key() +
                                 "' for this subcommand");
  }
};

// ---------------------------------------------------------------- bounds --

struct BoundsOpts {
  std::string channel = "bsc:0.0789";
  std::vector<std::string> kinds{"infinite"};
  std::string k_grid = "8,12,16,24,32,48,64,96,128,192,256,384,512";
  double tail_tol = 1e-9;
  int N = 0;
  std::string horizon = "log";
  double delta = 0.1;
  int I = 0;
  int n1 = 0;
  double ell = 0.0;
  int64_t samples = 200000;
  uint64_t seed = 1;
  int jobs = 0;
  std::string out = "-";
  std::string config;
};

void run_bounds(const BoundsOpts& o, SubConfig& cfg) {
  BoundsOpts opt = o;
  if (!opt.config.empty()) cfg.load(opt.config);
  cfg.merge_channel(opt.channel);
  cfg.merge("--kind", "kind", opt.kinds);
  cfg.merge("--k-grid", "k_grid", opt.k_grid);
  cfg.merge("--tail-tol", "tail_tol", opt.tail_tol);
  cfg.merge("--N", "N", opt.N);
  cfg.merge("--horizon", "horizon", opt.horizon);
  cfg.merge("--delta", "delta", opt.delta);
  cfg.merge("--I", "I", opt.I);
  cfg.merge("--n1", "n1", opt.n1);
  cfg.merge("--ell", "ell", opt.ell);
  cfg.merge("--samples", "samples", opt.samples);
  cfg.merge("--seed", "seed", opt.seed);
  cfg.merge("--jobs", "jobs", opt.jobs);
  cfg.merge("--out", "out", opt.out);
  cfg.reject_unknown();

  const ChannelSpec ch = parse_channel(opt.channel);
  const std::vector<int> ks = parse_int_list(opt.k_grid, "k-grid");

  std::vector<std::string> kinds;
  for (const auto& kind : opt.kinds)
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);

  auto row_of = [](const VlftPoint& pt, const char* kind) {
    return std::vector<std::string>{
        fmt_int(pt.config.k),  fmt_int(pt.config.N),   fmt_int(pt.config.I),
        fmt_int(pt.config.n1), format_g(pt.ell),       format_g(pt.rate),
        format_g(pt.epsilon),  kind};
  };

  auto rows_for_k = [&](int k) {
    std::vector<std::pair<std::string, std::vector<std::string>>> rows;
    double anchor = 0.0;  // best available ell for the converse row
    int anchor_rank = 0;
    auto offer_anchor = [&](double ell, int rank) {
      if (rank > anchor_rank) { anchor = ell; anchor_rank = rank; }
    };
    auto eff_horizon = [&] {
      if (opt.N > 0) return opt.N;
      if (opt.horizon == "backoff") return horizon_backoff(k, ch, opt.delta);
      return horizon_log(k, ch);
    };
    for (const auto& kind : kinds) {
      if (kind == "infinite") {
        VlftPoint pt = vlft_infinite(k, ch, opt.tail_tol);
        offer_anchor(pt.ell, 5);
        rows.emplace_back(kind, row_of(pt, "infinite"));
      } else if (kind == "truncated") {
        VlftPoint pt = vlft_truncated(k, eff_horizon(), ch);
        offer_anchor(pt.ell, 2);
        rows.emplace_back(kind, row_of(pt, "truncated"));
      } else if (kind == "repeated") {
        const int I = opt.I > 0 ? opt.I : increment_loglog(k);
        const int n1 = opt.n1 > 0 ? opt.n1 : k;
        int N = std::max(eff_horizon(), n1);
        N = n1 + (N - n1 + I - 1) / I * I;  // round up onto the attempt grid
        VlftPoint pt = vlft_repeated(k, N, I, n1, ch);
        offer_anchor(pt.ell, 3);
        rows.emplace_back(kind, row_of(pt, "repeated"));
      } else if (kind == "arq") {
        VlftPoint pt = vlft_arq_best(k, ch);
        offer_anchor(pt.ell, 1);
        rows.emplace_back(kind, row_of(pt, "arq"));
      } else if (kind == "dt") {
        DtVlft dt = dt_vlft_infinite(k, ch, opt.samples, opt.seed + static_cast<uint64_t>(k));
        offer_anchor(dt.ell, 4);
        rows.emplace_back(kind, std::vector<std::string>{
                                    fmt_int(k), "-1", "1", "1", format_g(dt.ell),
                                    format_g(dt.rate), "0", "dt"});
      } else if (kind != "converse") {
        throw std::invalid_argument("bounds: unknown kind '" + kind + "'");
      }
    }
    for (const auto& kind : kinds) {
      if (kind != "converse") continue;
      const double ell = opt.ell > 0.0 ? opt.ell : anchor;
      if (!(ell > 0.0))
        throw std::invalid_argument(
            "bounds: converse needs --ell or an achievability kind to anchor to");
      rows.emplace_back(kind, std::vector<std::string>{
                                  fmt_int(k), "-1", "0", "0", format_g(ell),
                                  format_g(vlft_converse_rate(ell, ch)), "0",
                                  "converse"});
    }
    // restore the user's kind order
    std::vector<std::vector<std::string>> ordered;
    for (const auto& kind : kinds)
      for (auto& [name, row] : rows)
        if (name == kind) ordered.push_back(row);
    return ordered;
  };

  // k values are independent; sweep them on a worker pool.
  std::vector<std::vector<std::vector<std::string>>> per_k(ks.size());
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::string err;
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < ks.size(); i = next.fetch_add(1)) {
      if (failed.load()) return;
      try {
        per_k[i] = rows_for_k(ks[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!failed.exchange(true)) err = e.what();
      }
    }
  };
  size_t n_workers = opt.jobs > 0 ? static_cast<size_t>(opt.jobs)
                                  : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, ks.size());
  std::vector<std::thread> pool;
  for (size_t w = 1; w < n_workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failed.load()) throw std::runtime_error(err);

  CsvTable table;
  table.header = {"k", "N", "I", "n1", "ell", "rate", "epsilon", "bound_kind"};
  for (auto& rows : per_k)
    for (auto& row : rows) table.add_row(std::move(row));
  emit_table(table, opt.out);
}

// ------------------------------------------------------------------ rcsp --

struct ScheduleOpts {
  int k = 0;
  std::string increments;
  int n1 = 0;
  int I = 0;
  int m = 0;
};

IncrementSchedule build_schedule(const ScheduleOpts& o, const char* who) {
  if (o.k < 1) throw std::invalid_argument(std::string(who) + ": --k is required");
  if (!o.increments.empty())
    return IncrementSchedule::from_increments(o.k, parse_int_list(o.increments.c_str(),
                                                                  "increments"));
  if (o.n1 < 1 || o.m < 1)
    throw std::invalid_argument(std::string(who) +
                                ": give --increments, or --n1 and --m (and --I for m > 1)");
  if (o.m > 1 && o.I < 1)
    throw std::invalid_argument(std::string(who) + ": --I is required when m > 1");
  return IncrementSchedule::uniform(o.k, o.n1, o.m > 1 ? o.I : 1, o.m);
}

struct RcspOpts {
  std::string channel = "awgn:2";
  ScheduleOpts sched;
  std::string jointness = "marginal";
  std::string decode = "bd";
  double tol = 1e-6;
  std::string mode = "repeated";
  std::string emit = "point";
  std::string out = "-";
  std::string config;
};

void run_rcsp(const RcspOpts& o, SubConfig& cfg) {
  RcspOpts opt = o;
  if (!opt.config.empty()) cfg.load(opt.config);
  cfg.merge_channel(opt.channel);
  cfg.merge("--k", "k", opt.sched.k);
  cfg.merge("--increments", "increments", opt.sched.increments);
  cfg.merge("--n1", "n1", opt.sched.n1);
  cfg.merge("--I", "I", opt.sched.I);
  cfg.merge("--m", "m", opt.sched.m);
  cfg.merge("--jointness", "jointness", opt.jointness);
  cfg.merge("--decode", "decode", opt.decode);
  cfg.merge("--tol", "tol", opt.tol);
  cfg.merge("--mode", "mode", opt.mode);
  cfg.merge("--emit", "emit", opt.emit);
  cfg.merge("--out", "out", opt.out);
  cfg.reject_unknown();

  const ChannelSpec ch = parse_channel(opt.channel);
  const IncrementSchedule sched = build_schedule(opt.sched, "rcsp");

  ErrorProfile prof;
  if (opt.jointness == "marginal") {
    prof = opt.decode == "ml" ? marginal_profile_ml(sched, ch)
                              : marginal_profile_bd(sched, ch);
  } else if (opt.decode == "ml") {
    throw std::invalid_argument(
        "rcsp: joint evaluation supports bounded-distance decoding only");
  } else if (opt.jointness == "exact") {
    prof = joint_profile_bd(sched, ch, opt.tol);
  } else if (opt.jointness == "chernoff_ub") {
    prof = chernoff_profile(sched, ch, true);
  } else if (opt.jointness == "chernoff_lb") {
    prof = chernoff_profile(sched, ch, false);
  } else {
    throw std::invalid_argument("rcsp: unknown jointness '" + opt.jointness + "'");
  }

  CsvTable table;
  if (opt.emit == "profile") {
    table.header = {"j", "n_j", "marginal", "joint"};
    for (int j = 0; j < sched.m(); ++j)
      table.add_row({fmt_int(j + 1), fmt_int(sched.n[j]), format_g(prof.marginal[j]),
                     prof.joint.empty() ? "" : format_g(prof.joint[j])});
  } else {
    const RepeatMode mode =
        opt.mode == "repeated" ? RepeatMode::REPEATED : RepeatMode::NON_REPEATING;
    PerformancePoint pp = expected_latency(prof, mode);
    table.header = {"k",    "m",    "N",      "increments", "jointness", "decode",
                    "mode", "ell",  "rate",   "outage",     "quadrature_error"};
    table.add_row({fmt_int(sched.k), fmt_int(sched.m()), fmt_int(sched.N()),
                   join_increments(sched.increments()), opt.jointness, opt.decode,
                   opt.mode, format_g(pp.ell), format_g(pp.rate), format_g(pp.outage),
                   format_g(prof.joint_error_estimate)});
  }
  emit_table(table, opt.out);
}

// -------------------------------------------------------------- optimize --

struct OptimizeOpts {
  std::string channel = "awgn:2";
  int k = 64;
  int m = 5;
  bool uniform = false;
  double outage = -1.0;  // >= 0 switches to the non-repeating outage search
  double ell_max = 0.0;
  double joint_tol = 1e-6;
  std::string emit = "result";
  std::string out = "-";
  std::string config;
};

void run_optimize(const OptimizeOpts& o, SubConfig& cfg) {
  OptimizeOpts opt = o;
  if (!opt.config.empty()) cfg.load(opt.config);
  cfg.merge_channel(opt.channel);
  cfg.merge("--k", "k", opt.k);
  cfg.merge("--m", "m", opt.m);
  cfg.merge("--uniform", "uniform", opt.uniform);
  cfg.merge("--outage", "outage", opt.outage);
  cfg.merge("--ell-max", "ell_max", opt.ell_max);
  cfg.merge("--joint-tol", "joint_tol", opt.joint_tol);
  cfg.merge("--emit", "emit", opt.emit);
  cfg.merge("--out", "out", opt.out);
  cfg.reject_unknown();

  SearchSpec spec;
  spec.k = opt.k;
  spec.m = opt.m;
  spec.channel = parse_channel(opt.channel);
  spec.uniform = opt.uniform;
  spec.p_outage = opt.outage >= 0.0 ? opt.outage : 1.0;
  spec.ell_max = opt.ell_max;
  spec.joint_tol = opt.joint_tol;

  OptimizationResult res;
  if (opt.outage >= 0.0)
    res = optimize_outage(spec);
  else if (opt.m == 1 || opt.uniform)
    res = optimize_uniform(spec);
  else
    res = optimize_nonuniform(spec);

  CsvTable table;
  if (opt.emit == "frontier") {
    table.header = {"ell", "rate", "outage"};
    for (const auto& pt : res.frontier)
      table.add_row({format_g(pt.ell), format_g(pt.rate), format_g(pt.outage)});
  } else if (opt.emit == "trajectory") {
    table.header = {"j", "n_j", "error_prob", "marginal"};
    for (const auto& row : error_trajectory(res))
      table.add_row({fmt_int(row.j), fmt_int(row.n_j), format_g(row.error_prob),
                     format_g(row.marginal)});
  } else {
    table.header = {"k",      "m",        "increments",  "N",
                    "mode",   "ell",      "rate",        "outage",
                    "feasible", "boundary_hit", "evaluations", "wall_seconds"};
    table.add_row({fmt_int(res.schedule.k), fmt_int(res.schedule.m()),
                   join_increments(res.schedule.increments()), fmt_int(res.schedule.N()),
                   res.mode == RepeatMode::REPEATED ? "repeated" : "non-repeating",
                   format_g(res.point.ell), format_g(res.point.rate),
                   format_g(res.point.outage), res.feasible ? "1" : "0",
                   res.boundary_hit ? "1" : "0", fmt_int(res.evaluations),
                   format_g(res.wall_seconds, 4)});
  }
  emit_table(table, opt.out);
}

// -------------------------------------------------------------- simulate --

struct SimulateOpts {
  std::string channel = "bsc:0.0789";
  ScheduleOpts sched;
  std::string code = "cc64";
  int64_t trials = 10000;
  uint64_t seed = 1;
  uint64_t rate_match_seed = 0x1905;
  std::string mode = "repeated";
  int wava_wraps = 4;
  int max_rounds = 1000;
  std::string emit = "point";
  std::string out = "-";
  std::string config;
};

void run_simulate(const SimulateOpts& o, SubConfig& cfg) {
  SimulateOpts opt = o;
  if (!opt.config.empty()) cfg.load(opt.config);
  cfg.merge_channel(opt.channel);
  cfg.merge("--k", "k", opt.sched.k);
  cfg.merge("--increments", "increments", opt.sched.increments);
  cfg.merge("--n1", "n1", opt.sched.n1);
  cfg.merge("--I", "I", opt.sched.I);
  cfg.merge("--m", "m", opt.sched.m);
  cfg.merge("--code", "code", opt.code);
  cfg.merge("--trials", "trials", opt.trials);
  cfg.merge("--seed", "seed", opt.seed);
  cfg.merge("--rate-match-seed", "rate_match_seed", opt.rate_match_seed);
  cfg.merge("--mode", "mode", opt.mode);
  cfg.merge("--wava-wraps", "wava_wraps", opt.wava_wraps);
  cfg.merge("--max-rounds", "max_rounds", opt.max_rounds);
  cfg.merge("--emit", "emit", opt.emit);
  cfg.merge("--out", "out", opt.out);
  cfg.reject_unknown();

  SimConfig sim;
  sim.schedule = build_schedule(opt.sched, "simulate");
  sim.channel = parse_channel(opt.channel);
  if (opt.code == "cc64")
    sim.decoder = DecoderKind::CC64_ML;
  else if (opt.code == "cc1024")
    sim.decoder = DecoderKind::CC1024_WAVA;
  else if (opt.code == "cc1024-ml")
    sim.decoder = DecoderKind::CC1024_ML;
  else if (opt.code == "ideal-bd")
    sim.decoder = DecoderKind::IDEAL_BD;
  else
    throw std::invalid_argument("simulate: unknown code '" + opt.code + "'");
  sim.mode = opt.mode == "repeated" ? RepeatMode::REPEATED : RepeatMode::NON_REPEATING;
  sim.trials = opt.trials;
  sim.seed = opt.seed;
  sim.rate_match_seed = opt.rate_match_seed;
  sim.wava_wraps = opt.wava_wraps;
  sim.max_rounds = opt.max_rounds;

  CsvTable table;
  if (opt.emit == "trajectory") {
    table.header = {"j", "n_j", "fail_rate", "se"};
    for (const auto& row : empirical_trajectory(sim))
      table.add_row({fmt_int(row.j), fmt_int(row.n_j), format_g(row.fail_rate),
                     format_g(row.se)});
  } else {
    SimResult res = simulate_genie(sim);
    table.header = {"k",           "m",          "N",        "increments",
                    "decoder",     "mode",       "trials",   "completed",
                    "aborted",     "outages",    "rounds",   "channel_uses",
                    "ell_hat",     "ell_se",     "rate",     "exact_decodes",
                    "heuristic_decodes"};
    table.add_row({fmt_int(sim.schedule.k), fmt_int(sim.schedule.m()),
                   fmt_int(sim.schedule.N()),
                   join_increments(sim.schedule.increments()), opt.code, opt.mode,
                   fmt_int(res.trials), fmt_int(res.completed), fmt_int(res.aborted),
                   fmt_int(res.outages), fmt_int(res.rounds), fmt_int(res.channel_uses),
                   format_g(res.ell_hat), format_g(res.ell_se), format_g(res.rate),
                   fmt_int(res.exact_decodes), fmt_int(res.heuristic_decodes)});
  }
  emit_table(table, opt.out);
}

// ---------------------------------------------------------------- recipe --

struct RecipeOpts {
  std::string name;
  std::string outdir;
  uint64_t seed = 1;
  bool list = false;
  std::string config;
};

int run_recipe_cmd(const RecipeOpts& o, SubConfig& cfg) {
  RecipeOpts opt = o;
  if (!opt.config.empty()) cfg.load(opt.config);
  cfg.merge("--name", "name", opt.name);
  cfg.merge("--outdir", "outdir", opt.outdir);
  cfg.merge("--seed", "seed", opt.seed);
  cfg.reject_unknown();

  if (opt.list) {
    for (const auto& name : recipe_names()) std::cout << name << "\n";
    return 0;
  }
  if (opt.name.empty())
    throw std::invalid_argument("recipe: --name is required (or use --list)");
  if (opt.outdir.empty()) opt.outdir = "out/" + opt.name;

  RecipeReport rep = run_recipe(opt.name, opt.outdir, opt.seed);
  std::cout << "manifest: " << rep.manifest_path << "\n";
  for (const auto& file : rep.files) std::cout << "file: " << rep.outdir << "/" << file << "\n";
  for (const auto& err : rep.errors) std::cerr << "failed: " << err << "\n";
  return rep.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ir-ntc: finite-blocklength achievability/converse bounds, "
      "rate-compatible sphere-packing analysis, schedule optimization, and "
      "Monte-Carlo simulation of incremental-redundancy feedback schemes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", irntc::kVersion);

  int rc = 0;

  // bounds ------------------------------------------------------------
  auto bounds = std::make_shared<BoundsOpts>();
  CLI::App* sb = app.add_subcommand(
      "bounds", "Variable-length feedback bounds over a grid of message sizes k");
  sb->add_option("--channel", bounds->channel,
                 "Channel: bsc:<p>, awgn:<snr_db>, or JSON")
      ->capture_default_str();
  sb->add_option("--kind", bounds->kinds,
                 "Bound kinds: infinite, converse, truncated, repeated, arq, dt "
                 "(repeatable / comma-separated)")
      ->delimiter(',')
      ->capture_default_str();
  sb->add_option("--k-grid", bounds->k_grid, "Comma-separated k values")
      ->capture_default_str();
  sb->add_option("--tail-tol", bounds->tail_tol,
                 "Certified tail tolerance for the unbounded-horizon series")
      ->capture_default_str();
  sb->add_option("--N", bounds->N, "Decoding horizon (0: use --horizon rule)")
      ->capture_default_str();
  sb->add_option("--horizon", bounds->horizon, "Horizon rule when --N is 0")
      ->check(CLI::IsMember({"log", "backoff"}))
      ->capture_default_str();
  sb->add_option("--delta", bounds->delta, "Rate back-off fraction for --horizon backoff")
      ->capture_default_str();
  sb->add_option("--I", bounds->I,
                 "Attempt spacing for kind=repeated (0: ceil(log2 k) rule)")
      ->capture_default_str();
  sb->add_option("--n1", bounds->n1, "First attempt for kind=repeated (0: n1 = k)")
      ->capture_default_str();
  sb->add_option("--ell", bounds->ell,
                 "Fixed latency for a standalone converse row (0: anchor to an "
                 "achievability kind)")
      ->capture_default_str();
  sb->add_option("--samples", bounds->samples, "Monte-Carlo samples for kind=dt")
      ->capture_default_str();
  sb->add_option("--seed", bounds->seed, "Base seed for kind=dt")->capture_default_str();
  sb->add_option("--jobs", bounds->jobs, "Worker threads (0: hardware)")
      ->capture_default_str();
  sb->add_option("--out", bounds->out, "Output CSV path, - for stdout")
      ->capture_default_str();
  sb->add_option("--config", bounds->config, "JSON config file (flags override)");
  sb->callback([&app, bounds] {
    SubConfig cfg{app.get_subcommand("bounds")};
    run_bounds(*bounds, cfg);
  });

  // rcsp ----------------------------------------------------------------
  auto rcsp = std::make_shared<RcspOpts>();
  CLI::App* sr = app.add_subcommand(
      "rcsp", "Sphere-packing error profile and latency of one attempt schedule");
  sr->add_option("--channel", rcsp->channel, "Channel: bsc:<p>, awgn:<snr_db>, or JSON")
      ->capture_default_str();
  sr->add_option("--k", rcsp->sched.k, "Message size in bits");
  sr->add_option("--increments", rcsp->sched.increments,
                 "Comma-separated increments I_1,...,I_m");
  sr->add_option("--n1", rcsp->sched.n1, "First attempt length (uniform schedule)");
  sr->add_option("--I", rcsp->sched.I, "Attempt spacing (uniform schedule)");
  sr->add_option("--m", rcsp->sched.m, "Number of attempts (uniform schedule)");
  sr->add_option("--jointness", rcsp->jointness, "Error-probability model")
      ->check(CLI::IsMember({"marginal", "exact", "chernoff_ub", "chernoff_lb"}))
      ->capture_default_str();
  sr->add_option("--decode", rcsp->decode, "Decoding model")
      ->check(CLI::IsMember({"bd", "ml"}))
      ->capture_default_str();
  sr->add_option("--tol", rcsp->tol, "Accuracy target for --jointness exact")
      ->capture_default_str();
  sr->add_option("--mode", rcsp->mode, "Retransmission handling")
      ->check(CLI::IsMember({"repeated", "non-repeating"}))
      ->capture_default_str();
  sr->add_option("--emit", rcsp->emit, "Output: point or profile")
      ->check(CLI::IsMember({"point", "profile"}))
      ->capture_default_str();
  sr->add_option("--out", rcsp->out, "Output CSV path, - for stdout")
      ->capture_default_str();
  sr->add_option("--config", rcsp->config, "JSON config file (flags override)");
  sr->callback([&app, rcsp] {
    SubConfig cfg{app.get_subcommand("rcsp")};
    run_rcsp(*rcsp, cfg);
  });

  // optimize -----------------------------------------------------------
  auto optimize = std::make_shared<OptimizeOpts>();
  CLI::App* so = app.add_subcommand(
      "optimize", "Search attempt schedules maximizing throughput");
  so->add_option("--channel", optimize->channel,
                 "Channel: bsc:<p>, awgn:<snr_db>, or JSON")
      ->capture_default_str();
  so->add_option("--k", optimize->k, "Message size in bits")->capture_default_str();
  so->add_option("--m", optimize->m, "Decoding attempts (1 selects ARQ; 0: as many as fit)")
      ->capture_default_str();
  so->add_flag("--uniform", optimize->uniform, "Restrict to uniform increments after n1");
  so->add_option("--outage", optimize->outage,
                 "Non-repeating search with this outage cap (1: unconstrained)");
  so->add_option("--ell-max", optimize->ell_max, "Latency constraint (0: none)")
      ->capture_default_str();
  so->add_option("--joint-tol", optimize->joint_tol,
                 "Joint evaluation accuracy for the refinement stage")
      ->capture_default_str();
  so->add_option("--emit", optimize->emit, "Output: result, frontier, or trajectory")
      ->check(CLI::IsMember({"result", "frontier", "trajectory"}))
      ->capture_default_str();
  so->add_option("--out", optimize->out, "Output CSV path, - for stdout")
      ->capture_default_str();
  so->add_option("--config", optimize->config, "JSON config file (flags override)");
  so->callback([&app, optimize] {
    SubConfig cfg{app.get_subcommand("optimize")};
    run_optimize(*optimize, cfg);
  });

  // simulate -----------------------------------------------------------
  auto simulate = std::make_shared<SimulateOpts>();
  CLI::App* ss = app.add_subcommand(
      "simulate", "Monte-Carlo run of the feedback scheme with a genie acknowledgement");
  ss->add_option("--channel", simulate->channel,
                 "Channel: bsc:<p>, awgn:<snr_db>, or JSON")
      ->capture_default_str();
  ss->add_option("--k", simulate->sched.k, "Message size in bits");
  ss->add_option("--increments", simulate->sched.increments,
                 "Comma-separated increments I_1,...,I_m");
  ss->add_option("--n1", simulate->sched.n1, "First attempt length (uniform schedule)");
  ss->add_option("--I", simulate->sched.I, "Attempt spacing (uniform schedule)");
  ss->add_option("--m", simulate->sched.m, "Number of attempts (uniform schedule)");
  ss->add_option("--code", simulate->code,
                 "Decoder: cc64, cc1024, cc1024-ml, or ideal-bd")
      ->check(CLI::IsMember({"cc64", "cc1024", "cc1024-ml", "ideal-bd"}))
      ->capture_default_str();
  ss->add_option("--trials", simulate->trials, "Monte-Carlo trials")->capture_default_str();
  ss->add_option("--seed", simulate->seed, "Base seed")->capture_default_str();
  ss->add_option("--rate-match-seed", simulate->rate_match_seed,
                 "Seed of the fixed puncturing order")
      ->capture_default_str();
  ss->add_option("--mode", simulate->mode, "Retransmission handling")
      ->check(CLI::IsMember({"repeated", "non-repeating"}))
      ->capture_default_str();
  ss->add_option("--wava-wraps", simulate->wava_wraps, "Wrap-around Viterbi iterations")
      ->capture_default_str();
  ss->add_option("--max-rounds", simulate->max_rounds,
                 "Abort a trial after this many transmission rounds")
      ->capture_default_str();
  ss->add_option("--emit", simulate->emit, "Output: point or trajectory")
      ->check(CLI::IsMember({"point", "trajectory"}))
      ->capture_default_str();
  ss->add_option("--out", simulate->out, "Output CSV path, - for stdout")
      ->capture_default_str();
  ss->add_option("--config", simulate->config, "JSON config file (flags override)");
  ss->callback([&app, simulate] {
    SubConfig cfg{app.get_subcommand("simulate")};
    run_simulate(*simulate, cfg);
  });

  // recipe -------------------------------------------------------------
  auto recipe = std::make_shared<RecipeOpts>();
  CLI::App* sp = app.add_subcommand(
      "recipe", "Run a named preset producing CSV files and a manifest");
  sp->add_option("--name", recipe->name, "Preset name (see --list)");
  sp->add_option("--outdir", recipe->outdir, "Output directory (default out/<name>)");
  sp->add_option("--seed", recipe->seed, "Seed for simulation presets")
      ->capture_default_str();
  sp->add_flag("--list", recipe->list, "List available presets");
  sp->add_option("--config", recipe->config, "JSON config file (flags override)");
  sp->callback([&app, recipe, &rc] {
    SubConfig cfg{app.get_subcommand("recipe")};
    rc = run_recipe_cmd(*recipe, cfg);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
