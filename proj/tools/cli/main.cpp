// Copyright 2026 The hbtcal Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hbtcal/hbtcal.h"
#include "io.hpp"

namespace {

using hbtcli::CliError;
using hbtcli::Config;
using hbtcli::format_number;
using hbtcli::kExitInvalid;
using hbtcli::kExitParse;
using hbtcli::Table;

struct SetupDeleter {
  void operator()(hbt_setup* p) const { hbt_setup_destroy(p); }
};
struct SourceDeleter {
  void operator()(hbt_source* p) const { hbt_source_destroy(p); }
};
struct SimulationDeleter {
  void operator()(hbt_simulation* p) const { hbt_simulation_destroy(p); }
};
struct BoundsDeleter {
  void operator()(hbt_bounds* p) const { hbt_bounds_destroy(p); }
};
struct ReportDeleter {
  void operator()(hbt_report* p) const { hbt_report_destroy(p); }
};
using Setup = std::unique_ptr<hbt_setup, SetupDeleter>;
using Source = std::unique_ptr<hbt_source, SourceDeleter>;
using Simulation = std::unique_ptr<hbt_simulation, SimulationDeleter>;
using Bounds = std::unique_ptr<hbt_bounds, BoundsDeleter>;
using Report = std::unique_ptr<hbt_report, ReportDeleter>;

void check(hbt_status status) {
  if (status != HBT_OK) throw CliError(kExitInvalid, std::string(hbt_status_name(status)) + ": " + hbt_last_error());
}

struct Options {
  std::string config;
  std::string out;
  std::string sweep;
  std::string modes;
  std::int64_t seed = -1;
  bool cross_check = false;
  bool json = false;
};

std::string emit(const Table& t, const Options& opt) { return opt.json ? t.to_json() : t.to_csv(); }

Setup make_setup(const Config& cfg) {
  hbt_setup* raw = nullptr;
  if (cfg.has("efficiencies")) {
    if (cfg.has("eta")) throw CliError(kExitParse, "config gives both 'efficiencies' and 'eta'");
    const auto eta = cfg.numbers("efficiencies");
    check(hbt_setup_create(eta.data(), eta.size(), &raw));
  } else {
    const auto d = cfg.integer_or("detectors", 0);
    if (d <= 0 || !cfg.has("eta")) throw CliError(kExitParse, "config needs 'efficiencies' or 'detectors' and 'eta'");
    check(hbt_setup_uniform(static_cast<int>(d), cfg.number("eta"), &raw));
  }
  return Setup(raw);
}

Source make_source(const Config& cfg, std::optional<double> mean_override = std::nullopt) {
  const auto kind = cfg.string_or("source", "");
  hbt_source* raw = nullptr;
  const double mean = mean_override ? *mean_override : (cfg.has("mean") ? cfg.number("mean") : 0.0);
  if (kind == "poissonian") {
    check(hbt_source_poissonian(mean, &raw));
  } else if (kind == "thermal") {
    check(hbt_source_thermal(mean, &raw));
  } else if (kind == "finite") {
    const auto p = cfg.numbers("probabilities");
    check(hbt_source_finite(p.data(), p.size(), &raw));
  } else if (kind == "fock") {
    check(hbt_source_fock(static_cast<int>(cfg.integer_or("photons", 0)), &raw));
  } else if (kind == "vacuum") {
    check(hbt_source_fock(0, &raw));
  } else {
    throw CliError(kExitParse, "unknown source '" + kind + "' (poissonian, thermal, finite, fock, vacuum)");
  }
  return Source(raw);
}

std::string source_label(const Config& cfg) {
  std::string s = cfg.string_or("source", "");
  if (cfg.has("mean")) s += "(mean=" + format_number(cfg.number("mean")) + ")";
  if (cfg.has("photons")) s += "(n=" + std::to_string(cfg.integer_or("photons", 0)) + ")";
  return s;
}

std::vector<double> efficiencies(const hbt_setup* setup) {
  std::vector<double> eta(static_cast<std::size_t>(hbt_setup_detectors(setup)));
  check(hbt_setup_efficiencies(setup, eta.data(), eta.size()));
  return eta;
}

std::vector<double> c_obs_of(const hbt_setup* setup, const hbt_source* source) {
  std::vector<double> c(static_cast<std::size_t>(hbt_setup_detectors(setup)) + 1);
  check(hbt_c_obs_analytic(setup, source, c.data(), c.size()));
  return c;
}

std::vector<double> field(const hbt_bounds* b, hbt_bound_field f) {
  std::vector<double> v(static_cast<std::size_t>(hbt_bounds_detectors(b)) + 1);
  check(hbt_bounds_get(b, f, v.data(), v.size()));
  return v;
}

std::vector<hbt_basis> basis(const hbt_bounds* b, int upper) {
  std::vector<hbt_basis> v(static_cast<std::size_t>(hbt_bounds_detectors(b)) + 1);
  check(hbt_bounds_basis(b, upper, v.data(), v.size()));
  return v;
}

const char* basis_name(hbt_basis b) { return b == HBT_BASIS_S ? "S" : "S'"; }

hbtcli::Cell row_label(int n, int d) { return n == d ? hbtcli::Cell{std::string("tail")} : hbtcli::Cell{std::int64_t{n}}; }

/// Eta uncertainty from the config, if any.
std::optional<std::vector<hbt_interval>> eta_box(const Config& cfg, const std::vector<double>& eta) {
  std::vector<hbt_interval> box;
  if (cfg.has("eta_min") || cfg.has("eta_max")) {
    const auto lo = cfg.numbers("eta_min");
    const auto hi = cfg.numbers("eta_max");
    if (lo.size() != eta.size() || hi.size() != eta.size()) {
      throw CliError(kExitParse, "'eta_min' and 'eta_max' need one entry per detector");
    }
    for (std::size_t i = 0; i < eta.size(); ++i) box.push_back({lo[i], hi[i]});
    return box;
  }
  if (cfg.has("eta_relative_uncertainty")) {
    const double rel = cfg.number("eta_relative_uncertainty");
    for (double e : eta) box.push_back({e * (1.0 - rel), e * (1.0 + rel)});
    return box;
  }
  return std::nullopt;
}

hbt_eta_scan scan_mode(const Config& cfg) {
  const auto s = cfg.string_or("eta_scan", "uniform-shift");
  if (s == "uniform-shift") return HBT_SCAN_UNIFORM_SHIFT;
  if (s == "box") return HBT_SCAN_BOX;
  throw CliError(kExitParse, "unknown eta_scan '" + s + "' (uniform-shift, box)");
}

struct Observed {
  std::vector<double> c_obs;
  std::optional<std::vector<std::uint64_t>> counts;
  std::uint64_t pulses = 0;
  std::string label;
};

Observed observe(const Config& cfg, const hbt_setup* setup) {
  const bool has_source = cfg.has("source");
  const bool has_measured = cfg.has("measured");
  if (has_source == has_measured) throw CliError(kExitParse, "config needs exactly one of 'source' and 'measured'");
  Observed o;
  const int d = hbt_setup_detectors(setup);
  if (has_source) {
    o.c_obs = c_obs_of(setup, make_source(cfg).get());
    o.label = "source:" + source_label(cfg);
    return o;
  }
  const auto file = cfg.path("measured");
  auto data = hbtcli::load_measured(file, d);
  o.label = "measured:" + file.filename().string();
  if (data.c_obs) {
    o.c_obs = *data.c_obs;
    return o;
  }
  hbt_simulation* raw = nullptr;
  check(hbt_simulation_from_counts(d, data.subset_clicks->data(), data.subset_clicks->size(), data.total_pulses, &raw));
  const Simulation sim(raw);
  o.c_obs.resize(static_cast<std::size_t>(d) + 1);
  check(hbt_simulation_coincidences(sim.get(), o.c_obs.data(), o.c_obs.size()));
  o.counts = std::move(data.subset_clicks);
  o.pulses = data.total_pulses;
  return o;
}

void add_certificate(Table& t, const hbt_setup* setup, const std::vector<double>& c, const hbt_bounds* b) {
  hbt_certificate cert{};
  const auto status = hbt_bounds_certificate(setup, c.data(), c.size(), b, &cert);
  if (status != HBT_OK) {
    t.trailer.emplace_back("certificate", std::string("error:") + hbt_status_name(status) + ":" + hbt_last_error());
    return;
  }
  auto flag = [](int v) { return std::string(v ? "true" : "false"); };
  t.trailer.emplace_back("certificate_s_nonnegative", flag(cert.s_nonnegative));
  t.trailer.emplace_back("certificate_s_tight", flag(cert.s_tight));
  t.trailer.emplace_back("certificate_s_residual", format_number(cert.s_residual));
  t.trailer.emplace_back("certificate_s_prime_nonnegative", flag(cert.s_prime_nonnegative));
  t.trailer.emplace_back("certificate_s_prime_tight", flag(cert.s_prime_tight));
  t.trailer.emplace_back("certificate_s_prime_residual", format_number(cert.s_prime_residual));
  t.trailer.emplace_back("certificate_tail_mass_at_infinity", format_number(cert.tail_mass_at_infinity));
}

int cmd_validate(const Options& opt) {
  const auto cfg = hbtcli::load_config(opt.config);
  const auto setup = make_setup(cfg);
  hbt_report* raw = nullptr;
  check(hbt_setup_validate(setup.get(), &raw));
  const Report report(raw);
  Table t;
  t.meta.emplace_back("schema", "hbtcal.validate.v1");
  t.meta.emplace_back("detectors", std::to_string(hbt_setup_detectors(setup.get())));
  t.meta.emplace_back("valid", hbt_report_valid(report.get()) ? "true" : "false");
  t.columns = {"violation"};
  for (std::size_t i = 0; i < hbt_report_count(report.get()); ++i) {
    t.rows.push_back({std::string(hbt_report_message(report.get(), i))});
    std::cerr << "violation: " << hbt_report_message(report.get(), i) << "\n";
  }
  hbtcli::write_output(opt.out, emit(t, opt));
  return hbt_report_valid(report.get()) ? hbtcli::kExitOk : kExitInvalid;
}

std::vector<double> sweep_grid(const Config& cfg, const std::string& prefix, double lo, double hi, std::int64_t steps,
                               const std::string& scale) {
  lo = cfg.number_or(prefix + "_min", lo);
  hi = cfg.number_or(prefix + "_max", hi);
  steps = cfg.integer_or(prefix + "_steps", steps);
  const auto how = cfg.string_or(prefix + "_scale", scale);
  if (steps < 1 || !(lo > 0.0) || !(hi >= lo)) throw CliError(kExitParse, "bad " + prefix + " sweep range");
  if (how != "log" && how != "linear") throw CliError(kExitParse, prefix + "_scale must be 'log' or 'linear'");
  std::vector<double> grid;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double s = steps == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(steps - 1);
    grid.push_back(how == "log" ? lo * std::pow(hi / lo, s) : lo + s * (hi - lo));
  }
  return grid;
}

/// One block of sweep rows: the true distribution of the source next to its bounds.
void sweep_rows(Table& t, double x, const hbt_setup* setup, const hbt_source* source) {
  const int d = hbt_setup_detectors(setup);
  const auto c = c_obs_of(setup, source);
  hbt_bounds* raw = nullptr;
  check(hbt_bounds_theorem1(setup, c.data(), c.size(), &raw));
  const Bounds b(raw);
  const auto lr = field(b.get(), HBT_LOWER_RAW), ur = field(b.get(), HBT_UPPER_RAW);
  const auto l = field(b.get(), HBT_LOWER), u = field(b.get(), HBT_UPPER);
  const auto bl = basis(b.get(), 0), bu = basis(b.get(), 1);
  double below = 0.0;
  for (int n = 0; n <= d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    double p = 0.0;
    if (n < d) {
      check(hbt_source_probability(source, n, &p));
      below += p;
    } else {
      p = 1.0 - below;
    }
    t.rows.push_back({x, row_label(n, d), p, lr[i], ur[i], l[i], u[i], std::string(basis_name(bl[i])),
                      std::string(basis_name(bu[i]))});
  }
}

int cmd_bounds_sweep(const Options& opt, const Config& cfg) {
  Table t;
  t.meta.emplace_back("schema", "hbtcal.bounds-sweep.v1");
  t.meta.emplace_back("sweep", opt.sweep);
  t.columns = {opt.sweep, "n", "p_true", "p_lower_raw", "p_upper_raw", "p_lower", "p_upper", "basis_lower",
               "basis_upper"};
  if (!cfg.has("source")) throw CliError(kExitParse, "a sweep needs a 'source'");
  if (opt.sweep == "mu") {
    const auto setup = make_setup(cfg);
    const auto kind = cfg.string_or("source", "");
    if (kind != "poissonian" && kind != "thermal") throw CliError(kExitParse, "--sweep mu needs a poissonian or thermal source");
    t.meta.emplace_back("source", kind);
    for (double mu : sweep_grid(cfg, "mu", 0.01, 2.0, 100, "log")) {
      sweep_rows(t, mu, setup.get(), make_source(cfg, mu).get());
    }
  } else if (opt.sweep == "eta") {
    const auto d = cfg.integer_or("detectors", 0);
    if (d <= 0) throw CliError(kExitParse, "--sweep eta needs 'detectors'");
    const auto source = make_source(cfg);
    t.meta.emplace_back("source", source_label(cfg));
    for (double eta : sweep_grid(cfg, "eta", 0.001, 0.1, 50, "log")) {
      hbt_setup* raw = nullptr;
      check(hbt_setup_uniform(static_cast<int>(d), eta, &raw));
      const Setup setup(raw);
      sweep_rows(t, eta, setup.get(), source.get());
    }
  } else {
    throw CliError(kExitParse, "bounds supports --sweep mu or --sweep eta");
  }
  hbtcli::write_output(opt.out, emit(t, opt));
  return hbtcli::kExitOk;
}

int cmd_bounds(const Options& opt) {
  const auto cfg = hbtcli::load_config(opt.config);
  if (!opt.sweep.empty()) return cmd_bounds_sweep(opt, cfg);
  const auto setup = make_setup(cfg);
  const int d = hbt_setup_detectors(setup.get());
  const auto obs = observe(cfg, setup.get());

  hbt_bounds* raw = nullptr;
  check(hbt_bounds_theorem1(setup.get(), obs.c_obs.data(), obs.c_obs.size(), &raw));
  const Bounds b(raw);

  Table t;
  t.meta.emplace_back("schema", "hbtcal.bounds.v1");
  t.meta.emplace_back("detectors", std::to_string(d));
  t.meta.emplace_back("input", obs.label);
  for (std::size_t r = 0; r < obs.c_obs.size(); ++r) {
    t.meta.emplace_back("c_obs_" + std::to_string(r), format_number(obs.c_obs[r]));
  }
  bool monotone = true;
  for (std::size_t r = 1; r < obs.c_obs.size(); ++r) monotone = monotone && obs.c_obs[r] <= obs.c_obs[r - 1];
  t.meta.emplace_back("c_obs_nonincreasing", monotone ? "true" : "false");
  t.columns = {"n", "p_lower_raw", "p_upper_raw", "p_lower", "p_upper", "basis_lower", "basis_upper"};

  const auto lr = field(b.get(), HBT_LOWER_RAW), ur = field(b.get(), HBT_UPPER_RAW);
  const auto l = field(b.get(), HBT_LOWER), u = field(b.get(), HBT_UPPER);
  const auto bl = basis(b.get(), 0), bu = basis(b.get(), 1);
  for (int n = 0; n <= d; ++n) {
    const auto i = static_cast<std::size_t>(n);
    t.rows.push_back({row_label(n, d), lr[i], ur[i], l[i], u[i], std::string(basis_name(bl[i])),
                      std::string(basis_name(bu[i]))});
  }

  // Widened bounds: counts give confidence intervals, the config may add an eta box.
  const auto eta = efficiencies(setup.get());
  const auto box = eta_box(cfg, eta);
  const bool has_delta = cfg.has("delta");
  if (has_delta && !obs.counts) throw CliError(kExitParse, "'delta' needs measured subset counts");
  if (box || has_delta) {
    std::vector<hbt_interval> c_iv(obs.c_obs.size());
    if (has_delta) {
      const double delta = cfg.number("delta");
      check(hbt_confidence_intervals(d, obs.counts->data(), obs.counts->size(), obs.pulses, delta, c_iv.data(),
                                     c_iv.size()));
      t.meta.emplace_back("delta", format_number(delta));
    } else {
      for (std::size_t r = 0; r < c_iv.size(); ++r) c_iv[r] = {obs.c_obs[r], obs.c_obs[r]};
    }
    std::vector<hbt_interval> e_iv;
    if (box) {
      e_iv = *box;
    } else {
      for (double e : eta) e_iv.push_back({e, e});
    }
    hbt_bounds* wraw = nullptr;
    check(hbt_bounds_worst_case(e_iv.data(), e_iv.size(), c_iv.data(), c_iv.size(), scan_mode(cfg),
                                static_cast<int>(cfg.integer_or("eta_grid", 21)), &wraw));
    const Bounds w(wraw);
    const auto wl = field(w.get(), HBT_LOWER), wu = field(w.get(), HBT_UPPER);
    t.columns.insert(t.columns.end(), {"p_lower_widened", "p_upper_widened"});
    for (int n = 0; n <= d; ++n) {
      t.rows[static_cast<std::size_t>(n)].push_back(wl[static_cast<std::size_t>(n)]);
      t.rows[static_cast<std::size_t>(n)].push_back(wu[static_cast<std::size_t>(n)]);
    }
    t.meta.emplace_back("eta_scan", cfg.string_or("eta_scan", "uniform-shift"));
    t.meta.emplace_back("widened_points_skipped", std::to_string(hbt_bounds_skipped_count(w.get())));
    for (std::size_t i = 0; i < hbt_bounds_skipped_count(w.get()); ++i) {
      std::cerr << "skipped grid point: " << hbt_bounds_skipped_message(w.get(), i) << "\n";
    }
  }

  if (opt.cross_check || cfg.boolean_or("cross_check", false)) {
    hbt_bounds* craw = nullptr;
    check(hbt_bounds_closed_form(setup.get(), obs.c_obs.data(), obs.c_obs.size(), &craw));
    const Bounds cf(craw);
    const auto cl = field(cf.get(), HBT_LOWER_RAW), cu = field(cf.get(), HBT_UPPER_RAW);
    t.columns.insert(t.columns.end(), {"p_lower_closed_form", "p_upper_closed_form"});
    double worst = 0.0;
    for (int n = 0; n <= d; ++n) {
      const auto i = static_cast<std::size_t>(n);
      t.rows[i].push_back(cl[i]);
      t.rows[i].push_back(cu[i]);
      for (auto [a, c] : {std::pair{lr[i], cl[i]}, std::pair{ur[i], cu[i]}}) {
        const double scale = std::max(std::abs(a), std::abs(c));
        if (scale > 0.0) worst = std::max(worst, std::abs(a - c) / scale);
      }
    }
    t.meta.emplace_back("cross_check_max_relative_difference", format_number(worst));
  }

  add_certificate(t, setup.get(), obs.c_obs, b.get());
  hbtcli::write_output(opt.out, emit(t, opt));
  return hbtcli::kExitOk;
}

int cmd_simulate(const Options& opt) {
  const auto cfg = hbtcli::load_config(opt.config);
  const auto setup = make_setup(cfg);
  const auto source = make_source(cfg);
  const int d = hbt_setup_detectors(setup.get());
  const auto pulses_cfg = cfg.integer_or("pulses", 1000000);
  if (pulses_cfg < 1) throw CliError(kExitParse, "'pulses' must be positive");
  const auto pulses = static_cast<std::uint64_t>(pulses_cfg);
  const auto seed = static_cast<std::uint64_t>(opt.seed >= 0 ? opt.seed : cfg.integer_or("seed", 1));
  const auto workers = static_cast<unsigned>(cfg.integer_or("workers", 0));

  hbt_simulation* raw = nullptr;
  check(hbt_simulate(setup.get(), source.get(), pulses, seed, workers, &raw));
  const Simulation sim(raw);
  std::vector<std::uint64_t> counts(std::size_t{1} << d);
  check(hbt_simulation_subset_counts(sim.get(), counts.data(), counts.size()));
  std::vector<double> c_sim(static_cast<std::size_t>(d) + 1);
  check(hbt_simulation_coincidences(sim.get(), c_sim.data(), c_sim.size()));
  const auto c_model = c_obs_of(setup.get(), source.get());
  std::vector<double> sigma(c_sim.size());
  check(hbt_model_standard_errors(setup.get(), source.get(), pulses, sigma.data(), sigma.size()));

  Table t;
  t.meta.emplace_back("schema", "hbtcal.simulate.v1");
  t.meta.emplace_back("detectors", std::to_string(d));
  t.meta.emplace_back("source", source_label(cfg));
  t.meta.emplace_back("seed", std::to_string(seed));
  t.columns = {"subset_mask", "clicks"};
  for (std::size_t m = 1; m < counts.size(); ++m) {
    t.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(counts[m])});
  }
  t.trailer.emplace_back("total_pulses", std::to_string(pulses));
  for (int r = 1; r <= d; ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double z = sigma[i] > 0.0 ? (c_sim[i] - c_model[i]) / sigma[i] : 0.0;
    t.trailer.emplace_back("compare_r" + std::to_string(r), "c_sim=" + format_number(c_sim[i]) +
                                                               ";c_analytic=" + format_number(c_model[i]) +
                                                               ";sigma=" + format_number(sigma[i]) +
                                                               ";z=" + format_number(z));
  }
  hbtcli::write_output(opt.out, emit(t, opt));
  return hbtcli::kExitOk;
}

std::vector<hbt_key_mode> parse_modes(const std::vector<std::string>& names) {
  std::vector<hbt_key_mode> modes;
  for (const auto& n : names) {
    hbt_key_mode m{};
    if (hbt_key_mode_parse(n.c_str(), &m) != HBT_OK) {
      throw CliError(kExitParse, "unknown mode '" + n + "' (poisson-known, D4, D3, D2)");
    }
    modes.push_back(m);
  }
  if (modes.empty()) throw CliError(kExitParse, "no key-rate modes selected");
  return modes;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_keyrate(const Options& opt) {
  const Config cfg = opt.config.empty() ? Config{nlohmann::json::object(), {}} : hbtcli::load_config(opt.config);
  if (!opt.sweep.empty() && opt.sweep != "tau") throw CliError(kExitParse, "keyrate supports --sweep tau only");

  auto params = hbt_protocol_defaults();
  params.q = cfg.number_or("q", params.q);
  params.q_prime = cfg.number_or("q_prime", params.q_prime);
  params.Y0 = cfg.number_or("Y0", params.Y0);
  params.channel_error = cfg.number_or("channel_error", params.channel_error);
  auto calib = hbt_calibration_defaults();
  calib.eta_total = cfg.number_or("eta_total", calib.eta_total);
  calib.relative_ambiguity = cfg.number_or("eta_ambiguity", calib.relative_ambiguity);
  calib.grid_points = static_cast<int>(cfg.integer_or("eta_grid", calib.grid_points));
  const auto treatment = cfg.string_or("eta_treatment", "worst-case");
  if (treatment != "worst-case" && treatment != "nominal") {
    throw CliError(kExitParse, "eta_treatment must be 'worst-case' or 'nominal'");
  }
  calib.worst_case = treatment == "worst-case" ? 1 : 0;

  const auto modes = parse_modes(!opt.modes.empty() ? split_list(opt.modes)
                                 : cfg.has("modes") ? cfg.strings("modes")
                                                    : std::vector<std::string>{"poisson-known", "D4", "D3", "D2"});
  const auto taus = cfg.has("taus") ? cfg.numbers("taus") : sweep_grid(cfg, "tau", 1e-3, 1.0, 13, "log");

  std::vector<hbt_keyrate_point> points(modes.size() * taus.size());
  check(hbt_keyrate_sweep(modes.data(), modes.size(), taus.data(), taus.size(), &params, &calib,
                          static_cast<unsigned>(cfg.integer_or("workers", 0)), points.data(), points.size()));

  Table t;
  t.meta.emplace_back("schema", "hbtcal.keyrate.v1");
  t.meta.emplace_back("q", format_number(params.q));
  t.meta.emplace_back("q_prime", format_number(params.q_prime));
  t.meta.emplace_back("Y0", format_number(params.Y0));
  t.meta.emplace_back("e0", format_number(params.e0));
  t.meta.emplace_back("channel_error", format_number(params.channel_error));
  t.meta.emplace_back("eta_total", format_number(calib.eta_total));
  t.meta.emplace_back("eta_ambiguity", format_number(calib.relative_ambiguity));
  t.meta.emplace_back("eta_treatment", treatment);
  t.meta.emplace_back("mu_prime", "mu/10");
  t.columns = {"mode", "tau", "mu", "mu_prime", "Y1L", "e1U", "e1U_raw", "p1_lower", "p1_prime_lower", "R", "R_raw",
               "no_key", "downgraded"};
  for (const auto& p : points) {
    t.rows.push_back({std::string(hbt_key_mode_name(p.mode)), p.tau, p.mu, p.mu_prime, p.Y1L, p.e1U, p.e1U_raw,
                      p.p1_lower, p.p1_prime_lower, p.R, p.R_raw, std::int64_t{p.no_key}, std::int64_t{p.downgraded}});
  }
  hbtcli::write_output(opt.out, emit(t, opt));
  return hbtcli::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-number bounds from multi-detector coincidence statistics"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "Flat JSON configuration file");
  app.add_option("--out", opt.out, "Output file (default stdout)");
  app.add_option("--seed", opt.seed, "Simulation seed (overrides the config)")->check(CLI::NonNegativeNumber);
  app.add_option("--sweep", opt.sweep, "Sweep a parameter: mu, eta (bounds) or tau (keyrate)")
      ->check(CLI::IsMember({"mu", "eta", "tau"}));
  app.add_option("--mode", opt.modes, "Comma-separated key-rate modes: poisson-known,D4,D3,D2");
  app.add_flag("--cross-check", opt.cross_check, "Add closed-form bounds next to the linear-algebra ones");
  app.add_flag("--json", opt.json, "Emit JSON instead of CSV");

  auto* validate = app.add_subcommand("validate", "Check the efficiency conditions of a setup");
  auto* bounds = app.add_subcommand("bounds", "Bounds on the photon-number distribution");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo click counts in measured-data format");
  auto* keyrate = app.add_subcommand("keyrate", "Decoy-state key rates against transmission");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (opt.config.empty() && !keyrate->parsed()) throw CliError(kExitParse, "--config is required");
    if (validate->parsed()) return cmd_validate(opt);
    if (bounds->parsed()) return cmd_bounds(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (keyrate->parsed()) return cmd_keyrate(opt);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return kExitParse;
}
