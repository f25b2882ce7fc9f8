#include "irntc/recipe.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

#include "irntc/io.hpp"
#include "irntc/optimizer.hpp"
#include "irntc/rcu.hpp"
#include "irntc/simulator.hpp"
#include "json.hpp"

namespace irntc {

namespace {

using nlohmann::json;

const double kBscP = 0.0789;
const double kAwgnDb = 2.0;

struct Task {
  std::string name;
  // Writes CSVs under outdir, returns their relative names, and may record
  // parameters into the manifest entry.
  std::function<std::vector<std::string>(const std::string&, uint64_t, json&)> run;
};

std::string out_path(const std::string& outdir, const std::string& file) {
  return (std::filesystem::path(outdir) / file).string();
}

std::vector<std::string> task_capacity(const std::string& outdir, uint64_t, json& p) {
  CsvTable t;
  t.header = {"channel", "parameter", "capacity_bits"};
  ChannelSpec b = ChannelSpec::bsc(kBscP);
  ChannelSpec a = ChannelSpec::awgn_db(kAwgnDb);
  t.add_row({"bsc", format_g(kBscP), format_g(b.capacity_bits())});
  t.add_row({"awgn", format_g(kAwgnDb), format_g(a.capacity_bits())});
  p["bsc_p"] = kBscP;
  p["awgn_snr_db"] = kAwgnDb;
  write_csv(t, out_path(outdir, "capacity.csv"));
  return {"capacity.csv"};
}

std::vector<std::string> task_arq(const std::string& outdir, uint64_t, json& p) {
  ChannelSpec ch = ChannelSpec::awgn_db(kAwgnDb);
  CsvTable t;
  t.header = {"k", "n1", "ell", "throughput"};
  for (int k : {16, 32, 64, 128, 256}) {
    OptimizationResult r = optimize_arq(k, ch);
    t.add_row({std::to_string(k), std::to_string(r.schedule.n.front()),
               format_g(r.point.ell), format_g(r.point.rate)});
  }
  p["snr_db"] = kAwgnDb;
  write_csv(t, out_path(outdir, "arq_blocklengths.csv"));
  return {"arq_blocklengths.csv"};
}

std::vector<std::string> task_nonuniform_eval(const std::string& outdir, uint64_t,
                                              json& p) {
  ChannelSpec ch = ChannelSpec::awgn_db(kAwgnDb);
  CsvTable t;
  t.header = {"k", "increments", "ell", "throughput", "quadrature_error"};
  for (const IncrementSchedule& s : benchmark_schedules_awgn2db()) {
    ErrorProfile prof = joint_profile_bd(s, ch, 1e-6);
    PerformancePoint pt = expected_latency(prof, RepeatMode::REPEATED);
    t.add_row({std::to_string(s.k), join_increments(s.increments()),
               format_g(pt.ell), format_g(pt.rate),
               format_g(prof.joint_error_estimate)});
  }
  p["snr_db"] = kAwgnDb;
  p["jointness"] = "exact";
  write_csv(t, out_path(outdir, "nonuniform_eval.csv"));
  return {"nonuniform_eval.csv"};
}

std::vector<std::string> task_uniform_search(const std::string& outdir, uint64_t,
                                             json& p) {
  ChannelSpec ch = ChannelSpec::awgn_db(kAwgnDb);
  CsvTable t;
  t.header = {"k", "n1", "I", "m", "ell", "throughput"};
  for (int k : {16, 32, 64, 128, 256}) {
    SearchSpec spec;
    spec.k = k;
    spec.m = 5;
    spec.channel = ch;
    spec.uniform = true;
    OptimizationResult r = optimize_uniform(spec);
    std::vector<int> inc = r.schedule.increments();
    t.add_row({std::to_string(k), std::to_string(r.schedule.n.front()),
               std::to_string(inc.size() > 1 ? inc[1] : 0),
               std::to_string(r.schedule.m()), format_g(r.point.ell),
               format_g(r.point.rate)});
  }
  p["snr_db"] = kAwgnDb;
  p["m"] = 5;
  write_csv(t, out_path(outdir, "uniform_search.csv"));
  return {"uniform_search.csv"};
}

std::vector<std::string> task_bsc_curves(const std::string& outdir, uint64_t, json& p) {
  ChannelSpec ch = ChannelSpec::bsc(kBscP);
  CsvTable t;
  t.header = {"kind", "k", "ell", "rate", "epsilon"};
  for (int k : {8, 16, 32, 64, 128, 256}) {
    VlftPoint inf = vlft_infinite(k, ch);
    t.add_row({"converse", std::to_string(k), format_g(inf.ell),
               format_g(vlft_converse_rate(inf.ell, ch)), "0"});
    t.add_row({"infinite", std::to_string(k), format_g(inf.ell), format_g(inf.rate),
               "0"});
    int n1 = k;
    int I = increment_loglog(k);
    int n0 = horizon_log(k, ch);
    int N = n1 + ((std::max(n0, n1 + I) - n1 + I - 1) / I) * I;
    VlftPoint rep = vlft_repeated(k, N, I, n1, ch);
    t.add_row({"repeated", std::to_string(k), format_g(rep.ell), format_g(rep.rate),
               "0"});
    VlftPoint trunc = vlft_truncated(k, horizon_backoff(k, ch, 0.1), ch);
    t.add_row({"truncated", std::to_string(k), format_g(trunc.ell),
               format_g(trunc.rate), format_g(trunc.epsilon)});
  }
  p["bsc_p"] = kBscP;
  write_csv(t, out_path(outdir, "bsc_vlft_curves.csv"));
  return {"bsc_vlft_curves.csv"};
}

std::vector<std::string> task_snr_sweep(const std::string& outdir, uint64_t, json& p) {
  std::vector<double> snrs = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  std::vector<int> ms = {1, 4, 8};
  std::vector<SweepRow> rows = sweep_snr(snrs, ms, 200.0);
  CsvTable t;
  t.header = {"snr_db", "m", "k", "n1", "I", "ell", "rate", "capacity", "gap"};
  for (const SweepRow& r : rows)
    t.add_row({format_g(r.snr_db), std::to_string(r.m), std::to_string(r.k),
               std::to_string(r.n1), std::to_string(r.I), format_g(r.ell),
               format_g(r.rate), format_g(r.capacity), format_g(r.gap)});
  p["ell_max"] = 200.0;
  p["m_list"] = ms;
  write_csv(t, out_path(outdir, "snr_sweep.csv"));
  return {"snr_sweep.csv"};
}

std::vector<std::string> task_outage(const std::string& outdir, uint64_t, json& p) {
  ChannelSpec ch = ChannelSpec::awgn_db(kAwgnDb);
  CsvTable cmp;
  cmp.header = {"p_outage", "increments", "ell", "throughput", "outage"};
  CsvTable traj;
  traj.header = {"p_outage", "attempt", "n_j", "joint_error", "marginal"};
  for (double pout : {1.0, 1e-10}) {
    SearchSpec spec;
    spec.k = 128;
    spec.m = 4;
    spec.channel = ch;
    spec.p_outage = pout;
    OptimizationResult r = optimize_outage(spec);
    cmp.add_row({format_g(pout), join_increments(r.schedule.increments()),
                 format_g(r.point.ell), format_g(r.point.rate),
                 format_g(r.point.outage)});
    for (const TrajectoryRow& row : error_trajectory(r))
      traj.add_row({format_g(pout), std::to_string(row.j), std::to_string(row.n_j),
                    format_g(row.error_prob), format_g(row.marginal)});
  }
  p["k"] = 128;
  p["m"] = 4;
  p["snr_db"] = kAwgnDb;
  write_csv(cmp, out_path(outdir, "outage_compare.csv"));
  write_csv(traj, out_path(outdir, "outage_trajectory.csv"));
  return {"outage_compare.csv", "outage_trajectory.csv"};
}

std::vector<std::string> task_sim_smoke(const std::string& outdir, uint64_t seed,
                                        json& p) {
  SimConfig cfg;
  cfg.schedule = IncrementSchedule::uniform(16, 16, 4, 9);
  cfg.channel = ChannelSpec::bsc(kBscP);
  cfg.decoder = DecoderKind::CC64_ML;
  cfg.trials = 2000;
  cfg.seed = seed;
  SimResult res = simulate_genie(cfg);
  CsvTable t;
  t.header = {"k", "increments", "trials", "ell_hat", "ell_se", "rate"};
  t.add_row({std::to_string(cfg.schedule.k), join_increments(cfg.schedule.increments()),
             std::to_string(res.trials), format_g(res.ell_hat), format_g(res.ell_se),
             format_g(res.rate)});
  write_csv(t, out_path(outdir, "sim_point.csv"));
  CsvTable traj;
  traj.header = {"attempt", "n_j", "fail_rate", "se"};
  for (const EmpiricalTrajectoryRow& r : empirical_trajectory(cfg))
    traj.add_row({std::to_string(r.j), std::to_string(r.n_j), format_g(r.fail_rate),
                  format_g(r.se)});
  write_csv(traj, out_path(outdir, "sim_trajectory.csv"));
  p["trials"] = cfg.trials;
  p["seed"] = seed;
  p["code"] = "cc64";
  return {"sim_point.csv", "sim_trajectory.csv"};
}

const std::vector<std::pair<std::string, std::vector<Task>>>& presets() {
  static const std::vector<std::pair<std::string, std::vector<Task>>> kPresets = {
      {"capacity", {{"capacity", task_capacity}}},
      {"table1", {{"arq_blocklengths", task_arq}}},
      {"table2", {{"nonuniform_eval", task_nonuniform_eval}}},
      {"table3", {{"uniform_search", task_uniform_search}}},
      {"fig4", {{"bsc_vlft_curves", task_bsc_curves}}},
      {"fig12", {{"snr_sweep", task_snr_sweep}}},
      {"outage", {{"outage", task_outage}}},
      {"sim-smoke", {{"sim_smoke", task_sim_smoke}}},
  };
  return kPresets;
}

}  // namespace

std::vector<IncrementSchedule> benchmark_schedules_awgn2db() {
  return {
      IncrementSchedule::from_increments(16, {19, 4, 4, 4, 8}),
      IncrementSchedule::from_increments(32, {38, 8, 8, 8, 12}),
      IncrementSchedule::from_increments(64, {85, 12, 8, 12, 16}),
      IncrementSchedule::from_increments(128, {176, 14, 14, 14, 28}),
      IncrementSchedule::from_increments(256, {352, 24, 24, 24, 48}),
  };
}

std::vector<std::string> recipe_names() {
  std::vector<std::string> names;
  for (const auto& pr : presets()) names.push_back(pr.first);
  return names;
}

RecipeReport run_recipe(const std::string& name, const std::string& outdir,
                        uint64_t seed) {
  const std::vector<Task>* tasks = nullptr;
  for (const auto& pr : presets())
    if (pr.first == name) tasks = &pr.second;
  if (!tasks) throw std::invalid_argument("run_recipe: unknown preset '" + name + "'");

  auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(outdir);
  RecipeReport rep;
  rep.preset = name;
  rep.outdir = outdir;

  json manifest;
  manifest["version"] = kVersion;
  manifest["preset"] = name;
  manifest["seed"] = seed;
  manifest["tasks"] = json::array();

  // Sub-tasks are independent and write disjoint files; fan them out to a
  // small worker pool and assemble the manifest in declaration order so the
  // output stays byte-deterministic regardless of scheduling.
  struct Outcome {
    json entry;
    std::vector<std::string> files;
    std::string error;
  };
  std::vector<Outcome> outcomes(tasks->size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks->size(); i = next.fetch_add(1)) {
      const Task& task = (*tasks)[i];
      Outcome& out = outcomes[i];
      out.entry["name"] = task.name;
      out.entry["parameters"] = json::object();
      try {
        out.files = task.run(outdir, seed, out.entry["parameters"]);
        out.entry["status"] = "ok";
        out.entry["files"] = out.files;
      } catch (const std::exception& e) {
        out.entry["status"] = "failed";
        out.entry["error"] = e.what();
        out.error = task.name + ": " + e.what();
      }
    }
  };
  size_t n_workers = std::min(tasks->size(),
                              size_t{std::max(1u, std::thread::hardware_concurrency())});
  std::vector<std::thread> pool;
  for (size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (Outcome& out : outcomes) {
    rep.files.insert(rep.files.end(), out.files.begin(), out.files.end());
    if (!out.error.empty()) rep.errors.push_back(out.error);
    manifest["tasks"].push_back(std::move(out.entry));
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  manifest["wall_seconds"] = rep.wall_seconds;
  manifest["status"] = rep.errors.empty() ? "ok" : "partial";
  manifest["files"] = rep.files;

  rep.manifest_path = out_path(outdir, "manifest.json");
  std::ofstream mf(rep.manifest_path, std::ios::binary | std::ios::trunc);
  if (!mf) throw std::runtime_error("run_recipe: cannot write " + rep.manifest_path);
  mf << manifest.dump(2) << '\n';
  return rep;
}

}  // namespace irntc
