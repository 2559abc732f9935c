#include "bhs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bhs/checkpoint.hpp"
#include "bhs/errors.hpp"
#include "bhs/ledger.hpp"
#include "bhs/params.hpp"
#include "bhs/probes.hpp"
#include "bhs/series.hpp"
#include "bhs/spectral.hpp"
#include "bhs/wave_operators.hpp"

namespace fs = std::filesystem;

namespace bhs {

const char* const kVersion = "bhs 1.0.0";

namespace {

// Thrown by the testing hook that mimics an abrupt kill mid-run.
struct StopSession {};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == ',' || c == ';') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& tok : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError(what + ": bad number '" + tok + "'");
    }
  }
  if (out.empty()) throw ValidationError(what + ": empty list");
  return out;
}

std::pair<double, double> parse_window(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("window: expected 'lo:hi', got '" + text + "'");
  try {
    const double lo = std::stod(text.substr(0, colon));
    const double hi = std::stod(text.substr(colon + 1));
    if (!(lo > 0.0) || !(hi >= lo))
      throw ValidationError("window: need 0 < lo <= hi in '" + text + "'");
    return {lo, hi};
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("window: bad numbers in '" + text + "'");
  }
}

std::array<double, 3> axis_values(const std::vector<double>& v, int dim,
                                  const std::string& key) {
  if (v.size() != 1 && static_cast<int>(v.size()) != dim)
    throw ValidationError("config: key '" + key + "' needs 1 or " +
                          std::to_string(dim) + " entries");
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) out[a] = v.size() == 1 ? v[0] : v[a];
  return out;
}

int to_point_count(double v, const std::string& key) {
  const long n = std::lround(v);
  if (std::abs(v - static_cast<double>(n)) > 1e-9 || n < 2)
    throw ValidationError("config: key '" + key + "' entry is not a grid size: " +
                          std::to_string(v));
  return static_cast<int>(n);
}

std::string sample_file_name(long step) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "sample_%08ld.ckpt", step);
  return buf;
}

void atomic_write_checkpoint(const fs::path& path, const ComplexField& field,
                             double time, std::optional<std::int64_t> step) {
  const fs::path tmp = path.string() + ".tmp";
  write_checkpoint(tmp.string(), field, time, step);
  fs::rename(tmp, path);
}

std::vector<ArtifactEntry> scan_artifacts(const std::string& out_dir) {
  std::vector<ArtifactEntry> out;
  for (const auto& de : fs::recursive_directory_iterator(out_dir)) {
    if (!de.is_regular_file()) continue;
    const std::string rel = fs::relative(de.path(), out_dir).generic_string();
    if (rel == "manifest.txt") continue;
    if (rel.size() > 4 && rel.compare(rel.size() - 4, 4, ".tmp") == 0) continue;
    out.push_back({rel, static_cast<std::uint64_t>(fs::file_size(de.path()))});
  }
  std::sort(out.begin(), out.end(),
            [](const ArtifactEntry& a, const ArtifactEntry& b) {
              return a.relpath < b.relpath;
            });
  return out;
}

ParamInput param_input_from(const Config& cfg, const RunConfig& rc,
                            const std::string& mode) {
  ParamInput in;
  in.alpha = mode == "weak_localization"
                 ? cfg.get_double("scattering.alpha_w", 0.25)
                 : rc.scattering.alpha;
  in.b = rc.scattering.b;
  in.epsilon = rc.scattering.epsilon;
  in.delta = rc.scattering.delta;
  in.sigma = rc.interaction.sigma;
  in.n = rc.grid.dim;
  return in;
}

// Region check declared by scattering.mode; a failing region aborts the run
// with the violated inequalities named.
void enforce_mode(const Config& cfg, const RunConfig& rc, const std::string& mode) {
  if (mode == "none") return;
  const ParamReport rep = validate_params(param_input_from(cfg, rc, mode), mode);
  if (rep.pass) return;
  std::string msg = "parameter region '" + mode + "' violated:";
  for (const auto& c : rep.checks)
    if (!c.pass && !c.informational) msg += " " + c.name + " (" + c.detail + ")";
  throw ValidationError(msg);
}

// ---------------------------------------------------------------------------
// Probe fan-out over a stored trajectory.

const std::vector<std::string> kProbeNames = {
    "channel_cauchy", "channel_cauchy_spatial", "profile",
    "weak_vanishing", "interaction_decay",      "weak_localization",
    "leakage",        "duhamel"};

void check_probe_names(const std::vector<std::string>& names) {
  for (const auto& n : names)
    if (std::find(kProbeNames.begin(), kProbeNames.end(), n) == kProbeNames.end())
      throw ValidationError("unknown probe '" + n + "'");
}

void apply_window_from_config(DiagnosticSeries& s, const Config& cfg,
                              const std::string& probe) {
  const std::string specific = "probes." + probe + ".fit_window";
  const std::string generic = "probes.fit_window";
  const std::string* key = cfg.has(specific) ? &specific
                           : cfg.has(generic) ? &generic
                                              : nullptr;
  if (!key || s.scales.empty()) return;
  const auto v = cfg.get_doubles(*key);
  if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] >= v[0]))
    throw ValidationError("config: key '" + *key + "' must be 'lo hi' with 0 < lo <= hi");
  // Clamp to the sampled range; the CSV records the window actually used.
  s.fit_lo = std::max(v[0], s.scales.front());
  s.fit_hi = std::min(v[1], s.scales.back());
  if (s.fit_lo > s.fit_hi) {
    s.fit_lo = 0.0;  // window misses the data entirely: fall back to full range
    s.fit_hi = 0.0;
  }
}

std::optional<double> pass_threshold(const DiagnosticSeries& s, const Config& cfg) {
  if (!cfg.has("probes.pass_margin") || !s.reference_exponent) return std::nullopt;
  return *s.reference_exponent + cfg.get_double("probes.pass_margin");
}

void emit_series(DiagnosticSeries s, const Config& cfg, const std::string& probe,
                 const std::string& out_dir, std::vector<std::string>& failed,
                 nlohmann::json& probe_index) {
  apply_window_from_config(s, cfg, probe);
  write_series_csv(out_dir + "/" + s.label + ".csv", s);
  const SeriesSummary sum = summarize_series(s, pass_threshold(s, cfg));
  write_summary_json(out_dir + "/" + s.label + ".json", sum);
  nlohmann::json j;
  j["fitted"] = sum.fitted;
  if (sum.fitted) j["exponent"] = sum.fit.exponent;
  if (sum.pass.has_value()) j["pass"] = *sum.pass;
  probe_index[s.label] = j;
  if (sum.pass.has_value() && !*sum.pass) failed.push_back(s.label);
}

std::vector<std::string> run_probes(const Trajectory& traj, const Config& cfg,
                                    const std::vector<std::string>& names,
                                    const std::string& out_dir, std::uint64_t seed,
                                    nlohmann::json& probe_index) {
  std::vector<std::string> failed;
  const ScatteringParams& sp = traj.config().scattering;
  const double alpha_w = cfg.get_double("scattering.alpha_w", 0.25);
  for (const auto& name : names) {
    if (name == "channel_cauchy") {
      emit_series(free_channel_cauchy_series(traj, sp.alpha, sp.b), cfg, name,
                  out_dir, failed, probe_index);
    } else if (name == "channel_cauchy_spatial") {
      emit_series(free_channel_cauchy_series_spatial(traj, sp.alpha), cfg, name,
                  out_dir, failed, probe_index);
    } else if (name == "profile") {
      FreeProfile fp = asymptotic_free_profile(traj, sp.alpha, sp.b);
      emit_series(fp.residuals, cfg, name, out_dir, failed, probe_index);
      // The profile lives in the start frame; its snapshot time is t = 1.
      write_checkpoint(out_dir + "/phi_plus.ckpt", fp.phi_plus, 1.0);
    } else if (name == "weak_vanishing") {
      const int count = static_cast<int>(cfg.get_long("probes.bank_count", 6));
      const auto bank = make_test_bank(traj.config().grid, count, seed);
      emit_series(weak_vanishing_probe(traj, bank, sp.alpha, sp.b), cfg, name,
                  out_dir, failed, probe_index);
    } else if (name == "interaction_decay") {
      emit_series(interaction_decay_probe(traj, sp.alpha, sp.b, sp.delta), cfg,
                  name, out_dir, failed, probe_index);
    } else if (name == "weak_localization") {
      emit_series(weak_localization_moment_series(traj, alpha_w, sp.epsilon), cfg,
                  name, out_dir, failed, probe_index);
    } else if (name == "leakage") {
      emit_series(directional_leakage_probe(traj, sp.epsilon, alpha_w), cfg, name,
                  out_dir, failed, probe_index);
    } else if (name == "duhamel") {
      const double t = traj.final_time();
      nlohmann::json j;
      j["label"] = "duhamel_residual";
      j["t"] = t;
      j["value"] = duhamel_residual(traj, t);
      std::ofstream out(out_dir + "/duhamel_residual.json", std::ios::trunc);
      out << j.dump(2) << "\n";
      if (!out) throw AbortError("cannot write duhamel_residual.json");
      probe_index["duhamel_residual"] = j;
    } else {
      throw ValidationError("unknown probe '" + name + "'");
    }
  }
  return failed;
}

// ---------------------------------------------------------------------------
// Ledger plumbing shared by run and resume.

struct LedgerSlot {
  LedgerKind kind;
  std::string name;
  std::unique_ptr<LedgerAccumulator> acc;
};

std::string sidecar_path(const std::string& out_dir, const std::string& name) {
  return out_dir + "/ledger_" + name + ".state";
}

std::vector<LedgerSlot> make_ledger_slots(const Config& cfg, const RunConfig& rc,
                                          const std::string& out_dir,
                                          bool load_existing) {
  std::vector<LedgerSlot> slots;
  if (!cfg.has("ledger.kinds")) return slots;
  for (const auto& token : split_list(cfg.get_string("ledger.kinds"))) {
    LedgerSlot slot;
    slot.kind = ledger_kind_from_name(token);
    slot.name = ledger_kind_name(slot.kind);
    const std::string side = sidecar_path(out_dir, slot.name);
    if (load_existing && fs::exists(side)) {
      slot.acc = std::make_unique<LedgerAccumulator>(
          LedgerAccumulator::load(side, rc.interaction));
    } else {
      slot.acc = std::make_unique<LedgerAccumulator>(
          slot.kind, rc.scattering.alpha, rc.scattering.b, rc.interaction);
    }
    slots.push_back(std::move(slot));
  }
  return slots;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_ledger_outputs(const LedgerSlot& slot, const std::string& out_dir,
                          nlohmann::json& ledger_index,
                          std::vector<std::string>& failed) {
  const auto& records = slot.acc->records();
  std::ostringstream csv;
  csv << "# ledger: " << slot.name << "\n";
  csv << "# alpha: " << fmt17(slot.acc->alpha()) << "\n";
  csv << "# b: " << fmt17(slot.acc->b()) << "\n";
  csv << "t,B,c1,c2,g_interaction,g_remainder,int_c1,int_c2,int_g,budget_defect\n";
  for (const auto& r : records)
    csv << fmt17(r.t) << "," << fmt17(r.B) << "," << fmt17(r.c1) << ","
        << fmt17(r.c2) << "," << fmt17(r.g_interaction) << ","
        << fmt17(r.g_remainder) << "," << fmt17(r.int_c1) << ","
        << fmt17(r.int_c2) << "," << fmt17(r.int_g) << ","
        << fmt17(r.budget_defect) << "\n";
  {
    std::ofstream out(out_dir + "/ledger_" + slot.name + ".csv", std::ios::trunc);
    out << csv.str();
    if (!out) throw AbortError("cannot write ledger CSV for " + slot.name);
  }
  const LedgerSummary s = slot.acc->finish();
  nlohmann::json j;
  j["kind"] = slot.name;
  j["observations"] = s.observations;
  j["norm_ref_sq"] = s.norm_ref_sq;
  j["first_B"] = s.first_B;
  j["sup_B"] = s.sup_B;
  j["min_c1"] = s.min_c1;
  j["min_c2"] = s.min_c2;
  j["int_c1"] = s.int_c1;
  j["int_c2"] = s.int_c2;
  j["int_g"] = s.int_g;
  j["g_l1"] = s.g_l1;
  j["final_defect"] = s.final_defect;
  j["max_defect"] = s.max_defect;
  j["positivity_ok"] = s.positivity_ok;
  j["propagation_inequality_ok"] = s.propagation_inequality_ok;
  {
    std::ofstream out(out_dir + "/ledger_" + slot.name + ".json", std::ios::trunc);
    out << j.dump(2) << "\n";
    if (!out) throw AbortError("cannot write ledger JSON for " + slot.name);
  }
  ledger_index[slot.name] = j;
  if (!s.positivity_ok) failed.push_back("ledger_" + slot.name + "_positivity");
  if (!s.propagation_inequality_ok)
    failed.push_back("ledger_" + slot.name + "_propagation");
}

std::vector<std::string> probe_list_from(const Config& cfg) {
  if (!cfg.has("probes.list")) return {};
  auto names = split_list(cfg.get_string("probes.list"));
  check_probe_names(names);
  return names;
}

// Everything after the time loop: final checkpoints, ledger outputs, probes,
// run summary, manifest finalization.
ExperimentOutcome finish_run(const Config& cfg, const Trajectory& traj,
                             std::vector<LedgerSlot>& slots, Manifest manifest,
                             const std::string& out_dir) {
  const auto& last = traj.samples().back();
  atomic_write_checkpoint(fs::path(out_dir) / "state.ckpt", last.field, last.t,
                          last.step);

  std::vector<std::string> failed;
  nlohmann::json ledger_index = nlohmann::json::object();
  for (auto& slot : slots) {
    slot.acc->save(sidecar_path(out_dir, slot.name));
    write_ledger_outputs(slot, out_dir, ledger_index, failed);
  }

  nlohmann::json probe_index = nlohmann::json::object();
  const std::uint64_t seed =
      static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const auto probe_failed =
      run_probes(traj, cfg, probe_list_from(cfg), out_dir, seed, probe_index);
  failed.insert(failed.end(), probe_failed.begin(), probe_failed.end());

  nlohmann::json summary;
  summary["config_hash"] = manifest.config_hash;
  summary["version"] = kVersion;
  summary["seed"] = manifest.seed;
  summary["final_time"] = traj.final_time();
  summary["final_l2_norm"] = l2_norm(traj.final_field());
  summary["samples_retained"] = traj.samples().size();
  summary["ledgers"] = ledger_index;
  summary["probes"] = probe_index;
  summary["failed"] = failed;
  {
    std::ofstream out(out_dir + "/summary.json", std::ios::trunc);
    out << summary.dump(2) << "\n";
    if (!out) throw AbortError("cannot write summary.json");
  }

  manifest.status = "complete";
  manifest.artifacts = scan_artifacts(out_dir);
  save_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);

  ExperimentOutcome outcome;
  outcome.manifest = std::move(manifest);
  outcome.out_dir = out_dir;
  outcome.completed = true;
  outcome.failed_probes = std::move(failed);
  return outcome;
}

std::vector<StepObserver> make_observers(const RunConfig& rc, const Config& cfg,
                                         const ExperimentOptions& opt,
                                         const std::string& out_dir,
                                         const std::vector<long>& keep,
                                         std::vector<LedgerSlot>& slots) {
  std::vector<StepObserver> observers;
  const fs::path samples_dir = fs::path(out_dir) / "samples";

  observers.push_back(
      {1, [&keep, samples_dir](long step, double t, const ComplexField& psi) {
         if (std::binary_search(keep.begin(), keep.end(), step))
           write_checkpoint((samples_dir / sample_file_name(step)).string(), psi,
                            t, step);
       }});

  if (!slots.empty()) {
    const long stride = cfg.get_long("ledger.observe_stride", 1);
    if (stride < 1) throw ValidationError("config: ledger.observe_stride must be >= 1");
    observers.push_back({stride, [&slots](long, double t, const ComplexField& psi) {
                           for (auto& slot : slots) slot.acc->observe(t, psi);
                         }});
  }

  if (opt.checkpoint_every > 0) {
    const fs::path state_path = fs::path(out_dir) / "state.ckpt";
    observers.push_back({opt.checkpoint_every,
                         [state_path, out_dir, &slots](long step, double t,
                                                       const ComplexField& psi) {
                           atomic_write_checkpoint(state_path, psi, t, step);
                           for (auto& slot : slots) {
                             const std::string side =
                                 sidecar_path(out_dir, slot.name);
                             slot.acc->save(side + ".tmp");
                             fs::rename(side + ".tmp", side);
                           }
                         }});
  }

  if (opt.stop_after_step >= 0) {
    const long stop_at = opt.stop_after_step;
    observers.push_back({1, [stop_at](long step, double, const ComplexField&) {
                           if (step >= stop_at) throw StopSession{};
                         }});
  }
  (void)rc;
  return observers;
}

}  // namespace

RunConfig run_config_from(const Config& cfg) {
  RunConfig rc;

  const int dim = static_cast<int>(cfg.get_long("grid.dim", 1));
  if (dim < 1 || dim > 3) throw ValidationError("config: grid.dim must be 1, 2, or 3");
  const auto pts = axis_values(cfg.get_doubles("grid.points"), dim, "grid.points");
  const auto box =
      axis_values(cfg.get_doubles("grid.box_length"), dim, "grid.box_length");
  std::array<int, 3> npts{1, 1, 1};
  std::array<double, 3> len{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) {
    npts[a] = to_point_count(pts[a], "grid.points");
    len[a] = box[a];
  }
  rc.grid = make_grid(dim, npts, len);

  rc.dt = cfg.get_double("time.dt");
  rc.t_end = cfg.get_double("time.t_end");
  rc.sample_stride = cfg.get_long("time.sample_stride", 0);
  rc.dyadic_samples = cfg.get_bool("time.dyadic_samples", true);
  rc.check_every = cfg.get_long("run.check_every", 16);
  rc.blowup_factor = cfg.get_double("run.blowup_factor", 1e6);

  const std::string kind = cfg.get_string("interaction.kind", "none");
  InteractionSpec& is = rc.interaction;
  if (kind == "none")
    is.kind = InteractionKind::None;
  else if (kind == "linear")
    is.kind = InteractionKind::LinearLocalized;
  else if (kind == "power")
    is.kind = InteractionKind::PowerNonlinear;
  else if (kind == "sum")
    is.kind = InteractionKind::Sum;
  else
    throw ValidationError("config: unknown interaction.kind '" + kind + "'");
  is.amplitude = cfg.get_double("interaction.amplitude", 0.0);
  is.amplitude_imag = cfg.get_double("interaction.amplitude_imag", 0.0);
  is.sigma = cfg.get_double("interaction.sigma", 2.0);
  const std::string mod = cfg.get_string("interaction.modulation", "constant");
  if (mod == "constant")
    is.modulation = Modulation::Constant;
  else if (mod == "cosine")
    is.modulation = Modulation::Cosine;
  else if (mod == "switch_on")
    is.modulation = Modulation::SwitchOn;
  else
    throw ValidationError("config: unknown interaction.modulation '" + mod + "'");
  is.omega = cfg.get_double("interaction.omega", 0.0);
  is.switch_time = cfg.get_double("interaction.switch_time", 4.0);
  is.coupling = cfg.get_double("interaction.coupling", 0.0);
  is.power = cfg.get_double("interaction.power", 3.0);

  rc.data.envelope_q0 = cfg.get_double("data.envelope_q0", 0.0);
  rc.data.normalize = cfg.get_bool("data.normalize", true);
  for (int k = 0;; ++k) {
    const std::string p = "data.packet" + std::to_string(k) + ".";
    if (!cfg.has(p + "width") && !cfg.has(p + "center") &&
        !cfg.has(p + "carrier") && !cfg.has(p + "amplitude"))
      break;
    GaussianPacket g;
    g.width = cfg.get_double(p + "width", 1.0);
    if (cfg.has(p + "center"))
      g.center = axis_values(cfg.get_doubles(p + "center"), dim, p + "center");
    if (cfg.has(p + "carrier"))
      g.carrier = axis_values(cfg.get_doubles(p + "carrier"), dim, p + "carrier");
    g.amplitude_re = cfg.get_double(p + "amplitude", 1.0);
    g.amplitude_im = cfg.get_double(p + "amplitude_imag", 0.0);
    rc.data.packets.push_back(g);
  }
  if (rc.data.packets.empty())
    throw ValidationError("config: at least one data.packet0.* block is required");

  rc.scattering.alpha = cfg.get_double("scattering.alpha", rc.scattering.alpha);
  rc.scattering.b = cfg.get_double("scattering.b", rc.scattering.b);
  rc.scattering.epsilon = cfg.get_double("scattering.epsilon", rc.scattering.epsilon);
  rc.scattering.delta = cfg.get_double("scattering.delta", rc.scattering.delta);
  return rc;
}

const std::vector<std::string>& known_probe_names() { return kProbeNames; }

ExperimentOutcome run_experiment(const Config& user_cfg,
                                 const ExperimentOptions& opt) {
  Config cfg = user_cfg;
  if (opt.seed) cfg.set("seed", std::to_string(*opt.seed));
  if (opt.checkpoint_every > 0)
    cfg.set("output.checkpoint_every", std::to_string(opt.checkpoint_every));

  // Validation happens before any output is created.
  const RunConfig rc = run_config_from(cfg);
  validate_run_config(rc);
  enforce_mode(cfg, rc, cfg.get_string("scattering.mode", "none"));
  probe_list_from(cfg);  // unknown probe names abort here
  const std::string out_dir = opt.out_dir;

  fs::create_directories(fs::path(out_dir) / "samples");
  cfg.save((fs::path(out_dir) / "config.txt").string());

  Manifest manifest;
  manifest.config_hash = Config::hash_hex(cfg.physics_hash());
  manifest.created = iso8601_utc_now();
  manifest.version = kVersion;
  manifest.seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  manifest.status = "running";
  save_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);

  const std::vector<long> keep = sample_steps(rc);
  std::vector<LedgerSlot> slots =
      make_ledger_slots(cfg, rc, out_dir, /*load_existing=*/false);
  const auto observers = make_observers(rc, cfg, opt, out_dir, keep, slots);

  try {
    Trajectory traj = evolve(rc, observers);
    return finish_run(cfg, traj, slots, std::move(manifest), out_dir);
  } catch (const StopSession&) {
    // Simulated kill: leave the manifest in `running` state, like a real one.
    ExperimentOutcome outcome;
    outcome.manifest = std::move(manifest);
    outcome.out_dir = out_dir;
    outcome.completed = false;
    return outcome;
  } catch (const AbortError&) {
    manifest.status = "aborted";
    manifest.artifacts = scan_artifacts(out_dir);
    save_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);
    throw;
  }
}

ExperimentOutcome resume_experiment(const std::string& manifest_path) {
  Manifest manifest = load_manifest(manifest_path);
  const std::string out_dir = fs::path(manifest_path).parent_path().string();
  if (manifest.status == "complete") {
    ExperimentOutcome outcome;
    outcome.manifest = std::move(manifest);
    outcome.out_dir = out_dir;
    outcome.completed = true;
    return outcome;
  }

  const Config cfg = Config::load((fs::path(out_dir) / "config.txt").string());
  if (Config::hash_hex(cfg.physics_hash()) != manifest.config_hash)
    throw ValidationError("resume: config.txt does not match the manifest hash");
  const RunConfig rc = run_config_from(cfg);
  validate_run_config(rc);
  enforce_mode(cfg, rc, cfg.get_string("scattering.mode", "none"));

  // Prior samples from disk; a torn final write is skipped (it is re-written
  // identically once the loop passes that step again).
  std::vector<Sample> prior;
  const fs::path samples_dir = fs::path(out_dir) / "samples";
  if (fs::exists(samples_dir)) {
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(samples_dir))
      if (de.is_regular_file() && de.path().extension() == ".ckpt")
        files.push_back(de.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      try {
        Checkpoint c = read_checkpoint(f.string());
        if (!c.step)
          throw ValidationError("resume: sample file missing its step index: " +
                                f.string());
        prior.push_back({static_cast<long>(*c.step), c.time, std::move(c.field)});
      } catch (const AbortError&) {
        fs::remove(f);
      }
    }
    std::sort(prior.begin(), prior.end(),
              [](const Sample& a, const Sample& b) { return a.step < b.step; });
  }

  long start_step = 0;
  std::optional<ComplexField> state;
  const fs::path state_path = fs::path(out_dir) / "state.ckpt";
  if (fs::exists(state_path)) {
    Checkpoint c = read_checkpoint(state_path.string());
    if (!c.step) throw ValidationError("resume: state.ckpt missing its step index");
    start_step = static_cast<long>(*c.step);
    state.emplace(std::move(c.field));
  } else {
    state.emplace(make_initial_state(rc.grid, rc.data));
  }
  // Samples past the state checkpoint are recomputed; drop them so the
  // trajectory vector never holds a step the loop has not reached yet.
  while (!prior.empty() && prior.back().step > start_step) prior.pop_back();

  ExperimentOptions opt;
  opt.out_dir = out_dir;
  opt.checkpoint_every = cfg.get_long("output.checkpoint_every", 0);

  const std::vector<long> keep = sample_steps(rc);
  std::vector<LedgerSlot> slots =
      make_ledger_slots(cfg, rc, out_dir, /*load_existing=*/true);
  const auto observers = make_observers(rc, cfg, opt, out_dir, keep, slots);

  try {
    Trajectory traj =
        evolve_from(rc, start_step, *state, observers, std::move(prior));
    return finish_run(cfg, traj, slots, std::move(manifest), out_dir);
  } catch (const AbortError&) {
    manifest.status = "aborted";
    manifest.artifacts = scan_artifacts(out_dir);
    save_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);
    throw;
  }
}

Trajectory load_trajectory(const std::string& out_dir) {
  const Config cfg = Config::load((fs::path(out_dir) / "config.txt").string());
  RunConfig rc = run_config_from(cfg);
  validate_run_config(rc);

  std::vector<Sample> samples;
  const fs::path samples_dir = fs::path(out_dir) / "samples";
  if (!fs::exists(samples_dir))
    throw ValidationError("no samples directory under '" + out_dir + "'");
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(samples_dir))
    if (de.is_regular_file() && de.path().extension() == ".ckpt")
      files.push_back(de.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Checkpoint c = read_checkpoint(f.string());
    if (!c.step)
      throw ValidationError("sample file missing its step index: " + f.string());
    samples.push_back({static_cast<long>(*c.step), c.time, std::move(c.field)});
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.step < b.step; });
  return Trajectory(std::move(rc), std::move(samples));
}

ExperimentOutcome analyze_experiment(const std::string& manifest_path,
                                     const std::vector<std::string>& probe_names) {
  Manifest manifest = load_manifest(manifest_path);
  const std::string out_dir = fs::path(manifest_path).parent_path().string();
  const Config cfg = Config::load((fs::path(out_dir) / "config.txt").string());
  if (Config::hash_hex(cfg.physics_hash()) != manifest.config_hash)
    throw ValidationError("analyze: config.txt does not match the manifest hash");

  std::vector<std::string> names = probe_names;
  if (names.empty()) names = probe_list_from(cfg);
  check_probe_names(names);

  const Trajectory traj = load_trajectory(out_dir);
  nlohmann::json probe_index = nlohmann::json::object();
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_long("seed", 1));
  const auto failed = run_probes(traj, cfg, names, out_dir, seed, probe_index);

  manifest.artifacts = scan_artifacts(out_dir);
  save_manifest(manifest_path, manifest);

  ExperimentOutcome outcome;
  outcome.manifest = std::move(manifest);
  outcome.out_dir = out_dir;
  outcome.completed = true;
  outcome.failed_probes = failed;
  return outcome;
}

// ---------------------------------------------------------------------------
// CLI.

namespace {

int exit_code_for(const std::vector<std::string>& failed) {
  if (failed.empty()) return 0;
  for (const auto& f : failed) std::fprintf(stderr, "FAIL %s\n", f.c_str());
  return 3;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag,
                 long checkpoint_every, std::optional<std::uint64_t> seed,
                 long stop_after_step) {
  const Config cfg = Config::load(config_path);
  ExperimentOptions opt;
  opt.out_dir = !out_flag.empty() ? out_flag : cfg.get_string("output.dir", "out");
  opt.checkpoint_every = checkpoint_every;
  opt.seed = seed;
  opt.stop_after_step = stop_after_step;
  const ExperimentOutcome outcome = run_experiment(cfg, opt);
  if (!outcome.completed) {
    std::printf("halted mid-run; resume with: bhsim resume %s/manifest.txt\n",
                outcome.out_dir.c_str());
    return 0;
  }
  std::printf("complete: %s/manifest.txt (%zu artifacts)\n",
              outcome.out_dir.c_str(), outcome.manifest.artifacts.size());
  return exit_code_for(outcome.failed_probes);
}

int finish_probe_series(DiagnosticSeries s, const std::string& out_dir,
                        const std::string& window,
                        std::optional<double> pass_exponent) {
  if (!window.empty()) {
    const auto [lo, hi] = parse_window(window);
    s.fit_lo = lo;
    s.fit_hi = hi;
  }
  fs::create_directories(out_dir);
  write_series_csv(out_dir + "/" + s.label + ".csv", s);
  const SeriesSummary sum = summarize_series(s, pass_exponent);
  write_summary_json(out_dir + "/" + s.label + ".json", sum);
  std::printf("%s", summary_to_json(sum).c_str());
  if (pass_exponent && !sum.fitted) {
    std::fprintf(stderr, "fit failed; cannot judge the pass threshold\n");
    return 1;
  }
  if (sum.pass.has_value() && !*sum.pass) return 3;
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"pseudospectral workbench for the fourth-order free flow "
               "i d/dt psi = (-Lap)^2 psi + N psi"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  // simulate
  std::string sim_config, sim_out;
  long sim_ckpt = 0, sim_stop = -1;
  std::uint64_t sim_seed = 0;
  auto* sim = app.add_subcommand("simulate", "run a configured experiment");
  sim->add_option("config", sim_config, "experiment config file")->required();
  sim->add_option("--out", sim_out, "output directory (default: output.dir or 'out')");
  sim->add_option("--checkpoint-every", sim_ckpt, "steps between resume checkpoints");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "override the config seed");
  sim->add_option("--stop-after-step", sim_stop)->group("");

  // resume
  std::string res_manifest;
  auto* res = app.add_subcommand("resume", "continue an interrupted run");
  res->add_option("manifest", res_manifest, "manifest of the interrupted run")
      ->required();

  // analyze
  std::string ana_manifest, ana_probes;
  auto* ana = app.add_subcommand("analyze", "re-run probes on a stored run");
  ana->add_option("manifest", ana_manifest, "manifest of a finished run")->required();
  ana->add_option("--probes", ana_probes, "probe names (default: config probes.list)");

  // validate
  std::string val_config;
  auto* val = app.add_subcommand("validate", "check a config and its parameter region");
  val->add_option("config", val_config, "experiment config file")->required();

  // fit
  std::string fit_csv, fit_window;
  double fit_pass = 0.0;
  auto* fit = app.add_subcommand("fit", "fit a power law to a stored CSV series");
  fit->add_option("csv", fit_csv, "series CSV file")->required();
  fit->add_option("--window", fit_window, "fit window lo:hi");
  auto* fit_pass_opt =
      fit->add_option("--pass-exponent", fit_pass, "fail (exit 3) above this exponent");

  // probe-kernel
  long pk_dim = 1, pk_points = 4096, pk_count = 12;
  double pk_box = 8192.0, pk_q0 = 0.75, pk_tmin = 10.0, pk_tmax = 1000.0;
  double pk_pass = 0.0;
  std::string pk_gamma, pk_out = ".", pk_window;
  auto* pk = app.add_subcommand("probe-kernel",
                                "sup-norm decay of the free flow on near-delta data");
  pk->add_option("--dim", pk_dim, "space dimension (1-3)");
  pk->add_option("--points", pk_points, "grid points per axis");
  pk->add_option("--box", pk_box, "box length per axis");
  pk->add_option("--q0", pk_q0, "spectral envelope scale");
  pk->add_option("--gamma", pk_gamma, "derivative multi-index, e.g. '1 0'");
  pk->add_option("--t-min", pk_tmin, "first time");
  pk->add_option("--t-max", pk_tmax, "last time");
  pk->add_option("--t-count", pk_count, "number of log-spaced times");
  pk->add_option("--window", pk_window, "fit window lo:hi");
  pk->add_option("--out", pk_out, "output directory");
  auto* pk_pass_opt = pk->add_option("--pass-exponent", pk_pass,
                                     "fail (exit 3) above this exponent");

  // probe-commutator
  long pc_dim = 1, pc_points = 512;
  double pc_box = 128.0, pc_alpha = 0.25, pc_b = 0.10, pc_pass = 0.0;
  std::uint64_t pc_seed = 0x5EEDull;
  std::string pc_times = "16 32 64 128 256 512 1024", pc_out = ".", pc_window;
  auto* pc = app.add_subcommand("probe-commutator",
                                "operator norm of the cutoff commutator vs t");
  pc->add_option("--dim", pc_dim, "space dimension (1-3)");
  pc->add_option("--points", pc_points, "grid points per axis");
  pc->add_option("--box", pc_box, "box length per axis");
  pc->add_option("--alpha", pc_alpha, "spatial cutoff exponent");
  pc->add_option("--b", pc_b, "spectral cutoff exponent");
  pc->add_option("--times", pc_times, "evaluation times");
  pc->add_option("--window", pc_window, "fit window lo:hi");
  pc->add_option("--out", pc_out, "output directory");
  pc->add_option("--seed", pc_seed, "power-iteration seed");
  auto* pc_pass_opt = pc->add_option("--pass-exponent", pc_pass,
                                     "fail (exit 3) above this exponent");

  // probe-velocity
  long pv_dim = 1, pv_points = 1024, pv_sign = 1;
  double pv_box = 512.0, pv_t = 16.0, pv_sigma = 2.0, pv_eps = 0.1;
  double pv_band = 0.0, pv_pass = 0.0;
  std::uint64_t pv_seed = 0x5EEDull;
  std::string pv_kind = "mmvb1", pv_avalues, pv_out = ".", pv_window;
  auto* pv = app.add_subcommand("probe-velocity",
                                "minimal/maximal velocity bound vs flow duration");
  pv->add_option("--dim", pv_dim, "space dimension (1-3)");
  pv->add_option("--points", pv_points, "grid points per axis");
  pv->add_option("--box", pv_box, "box length per axis");
  pv->add_option("--kind", pv_kind, "mmvb1 (outgoing) or mmvb2 (low-frequency)");
  pv->add_option("--t", pv_t, "reference time in the cutoff scales");
  pv->add_option("--sigma", pv_sigma, "weight exponent of <x1>^-sigma");
  pv->add_option("--epsilon", pv_eps, "scale-splitting parameter");
  pv->add_option("--band-q0", pv_band, "spectral band envelope scale (0: off)");
  pv->add_option("--sign", pv_sign, "side selector for mmvb2 (+1/-1)");
  pv->add_option("--a-values", pv_avalues, "flow durations")->required();
  pv->add_option("--window", pv_window, "fit window lo:hi over the scale variable");
  pv->add_option("--out", pv_out, "output directory");
  pv->add_option("--seed", pv_seed, "power-iteration seed");
  auto* pv_pass_opt = pv->add_option("--pass-exponent", pv_pass,
                                     "fail (exit 3) above this exponent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      std::optional<std::uint64_t> seed;
      if (sim_seed_opt->count() > 0) seed = sim_seed;
      return cmd_simulate(sim_config, sim_out, sim_ckpt, seed, sim_stop);
    }
    if (res->parsed()) {
      const ExperimentOutcome outcome = resume_experiment(res_manifest);
      std::printf("complete: %s/manifest.txt (%zu artifacts)\n",
                  outcome.out_dir.c_str(), outcome.manifest.artifacts.size());
      return exit_code_for(outcome.failed_probes);
    }
    if (ana->parsed()) {
      const ExperimentOutcome outcome =
          analyze_experiment(ana_manifest, split_list(ana_probes));
      std::printf("analyzed: %s (%zu artifacts)\n", outcome.out_dir.c_str(),
                  outcome.manifest.artifacts.size());
      return exit_code_for(outcome.failed_probes);
    }
    if (val->parsed()) {
      const Config cfg = Config::load(val_config);
      const RunConfig rc = run_config_from(cfg);
      const long n = validate_run_config(rc);
      probe_list_from(cfg);
      std::printf("run config OK: %ld steps of dt=%g from t=1 to t=%g\n", n,
                  rc.dt, rc.t_end);
      const std::string mode = cfg.get_string("scattering.mode", "none");
      if (mode != "none") {
        const ParamReport rep =
            validate_params(param_input_from(cfg, rc, mode), mode);
        std::printf("%s", param_report_text(rep).c_str());
        if (!rep.pass) return 1;
      }
      return 0;
    }
    if (fit->parsed()) {
      DiagnosticSeries s = read_series_csv(fit_csv);
      if (!fit_window.empty()) {
        const auto [lo, hi] = parse_window(fit_window);
        s.fit_lo = lo;
        s.fit_hi = hi;
      }
      fit_series(s);  // surface window/positivity problems as exit 1
      std::optional<double> pass;
      if (fit_pass_opt->count() > 0) pass = fit_pass;
      const SeriesSummary sum = summarize_series(s, pass);
      std::printf("%s", summary_to_json(sum).c_str());
      if (sum.pass.has_value() && !*sum.pass) return 3;
      return 0;
    }
    if (pk->parsed()) {
      const GridSpec grid = make_grid(static_cast<int>(pk_dim),
                                      static_cast<int>(pk_points), pk_box);
      KernelProbeConfig kc;
      kc.q0 = pk_q0;
      if (!pk_gamma.empty()) {
        const auto g = parse_double_list(pk_gamma, "--gamma");
        if (static_cast<int>(g.size()) > grid.dim)
          throw ValidationError("--gamma: more entries than dimensions");
        for (std::size_t a = 0; a < g.size(); ++a)
          kc.gamma[a] = static_cast<int>(std::lround(g[a]));
      }
      kc.times = log_spaced_times(pk_tmin, pk_tmax, static_cast<int>(pk_count));
      std::optional<double> pass;
      if (pk_pass_opt->count() > 0) pass = pk_pass;
      return finish_probe_series(kernel_decay_probe(grid, kc), pk_out, pk_window,
                                 pass);
    }
    if (pc->parsed()) {
      const GridSpec grid = make_grid(static_cast<int>(pc_dim),
                                      static_cast<int>(pc_points), pc_box);
      const auto times = parse_double_list(pc_times, "--times");
      std::optional<double> pass;
      if (pc_pass_opt->count() > 0) pass = pc_pass;
      return finish_probe_series(
          commutator_decay_probe(grid, pc_alpha, pc_b, times, pc_seed), pc_out,
          pc_window, pass);
    }
    if (pv->parsed()) {
      const GridSpec grid = make_grid(static_cast<int>(pv_dim),
                                      static_cast<int>(pv_points), pv_box);
      VelocityProbeConfig vc;
      if (pv_kind == "mmvb1")
        vc.kind = VelocityKind::MMVB1;
      else if (pv_kind == "mmvb2")
        vc.kind = VelocityKind::MMVB2;
      else
        throw ValidationError("--kind must be mmvb1 or mmvb2");
      vc.t = pv_t;
      vc.sigma = pv_sigma;
      vc.epsilon = pv_eps;
      vc.band_q0 = pv_band;
      vc.sign = static_cast<int>(pv_sign);
      vc.seed = pv_seed;
      vc.a_values = parse_double_list(pv_avalues, "--a-values");
      std::optional<double> pass;
      if (pv_pass_opt->count() > 0) pass = pv_pass;
      return finish_probe_series(velocity_bound_probe(grid, vc), pv_out,
                                 pv_window, pass);
    }
    std::fprintf(stderr, "no subcommand\n");
    return 1;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const AbortError& e) {
    std::fprintf(stderr, "runtime abort: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace bhs
