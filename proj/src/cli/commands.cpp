#include "flucto/cli/commands.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <variant>

#include "flucto/bk_limit.hpp"
#include "flucto/detail/parallel.hpp"
#include "flucto/entanglement.hpp"
#include "flucto/errors.hpp"
#include "flucto/ft_closed_form.hpp"
#include "flucto/ft_numeric.hpp"
#include "flucto/tpm.hpp"

namespace flucto::cli {

namespace {

using Row = std::vector<std::pair<std::string, std::string>>;
using Clock = std::chrono::steady_clock;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Report {
  std::string body;
  Row meta;
};

std::string yes_no(bool b) { return b ? "true" : "false"; }

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Library argument errors become configuration errors tagged with `scope`.
template <class F>
auto guarded(const std::string& scope, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(scope + ": " + e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(scope + ": " + e.what());
  }
}

ModelParams model_params(const Config& c, bool m2_optional = false) {
  const double m1 = c.real("model.m1");
  const double m2 = m2_optional ? c.real("model.m2", m1) : c.real("model.m2");
  const double k = c.real("model.k", 1.0);
  const double beta1 = c.real("model.beta1", 1.0);
  const double hbar = c.real("model.hbar", 1.0);
  for (const auto& [key, v] : {std::pair{"model.m1", m1}, std::pair{"model.m2", m2},
                               std::pair{"model.k", k}, std::pair{"model.beta1", beta1},
                               std::pair{"model.hbar", hbar}}) {
    if (!(v > 0.0)) {
      throw ConfigError(std::string(key) + ": must be positive, got " + format_real(v));
    }
  }
  return guarded("model", [&] { return ModelParams(m1, m2, k, beta1, hbar); });
}

void add_model(Row& row, const ModelParams& p) {
  row.emplace_back("model.m1", format_real(p.m1()));
  row.emplace_back("model.m2", format_real(p.m2()));
  row.emplace_back("model.k", format_real(p.k()));
  row.emplace_back("model.beta1", format_real(p.beta1()));
  row.emplace_back("model.hbar", format_real(p.hbar()));
}

ProcessInterval process(const Config& c, Row& row) {
  if (c.has("process.t")) {
    if (c.has("process.v")) {
      throw ConfigError("process.t: give either process.v or process.t, not both");
    }
    const double t = c.real("process.t");
    row.emplace_back("process.t", format_real(t));
    return guarded("process.t", [&] { return ProcessInterval::generic(t); });
  }
  const std::int64_t v = c.integer("process.v", 1);
  row.emplace_back("process.v", std::to_string(v));
  if (v > std::numeric_limits<int>::max()) {
    throw ConfigError("process.v: value too large");
  }
  return guarded("process.v", [&] { return ProcessInterval::odd_multiple(static_cast<int>(v)); });
}

using AnyState = std::variant<classical::ClassicalState, quantum::QuantumState>;

std::string framework_of(const Config& c, const std::string& fallback = "classical") {
  const std::string f = c.text("state.framework", fallback);
  if (f != "classical" && f != "quantum") {
    throw ConfigError("state.framework: expected classical or quantum, got '" + f + "'");
  }
  return f;
}

AnyState prepare(const Config& c, const std::string& framework, const std::string& variant,
                 const ModelParams& p, Row& row) {
  const auto use = [&](const std::string& key, std::optional<double> fallback = std::nullopt) {
    const double v = fallback ? c.real(key, *fallback) : c.real(key);
    row.emplace_back(key, format_real(v));
    return v;
  };
  const std::string scope = "state (" + framework + " " + variant + ")";
  if (framework == "classical") {
    if (variant == "TG") {
      const double s2 = use("state.sigma2");
      const double xb = use("state.xbar2", 0.0);
      const double pb = use("state.pbar2", 0.0);
      const double w1 = use("state.x1_width", 1.0);
      return guarded(scope, [&] {
        return AnyState{classical::ClassicalState::thermal_gaussian(p, s2, xb, pb, w1)};
      });
    }
    if (variant == "TT" || variant == "Corr") {
      const double q = variant == "TT" ? use("state.delta2") : use("state.c");
      const double w1 = use("state.x1_width", 1.0);
      const double w2 = use("state.x2_width", 1.0);
      return guarded(scope, [&] {
        return AnyState{variant == "TT" ? classical::ClassicalState::thermal_thermal(p, q, w1, w2)
                                        : classical::ClassicalState::correlated(p, q, w1, w2)};
      });
    }
    throw ConfigError("state.variant: unknown classical variant '" + variant +
                      "' (expected TG, TT or Corr)");
  }
  using quantum::QuantumState;
  if (variant == "MomCorr") {
    const double s = use("state.sigma1");
    const double cc = use("state.c");
    return guarded(scope, [&] { return AnyState{QuantumState::momentum_correlated(p, s, cc)}; });
  }
  static const std::set<std::string> known{"TG", "TT", "Superpos", "Entangled", "PosCorr"};
  if (known.count(variant) == 0) {
    throw ConfigError("state.variant: unknown quantum variant '" + variant +
                      "' (expected TG, TT, MomCorr, Superpos, Entangled or PosCorr)");
  }
  const double s1 = use("state.sigma1");
  const double s2 = use("state.sigma2");
  if (variant == "TG" || variant == "Superpos") {
    const double xb = use("state.xbar2", 0.0);
    const double pb = use("state.pbar2", 0.0);
    if (variant == "TG") {
      return guarded(scope,
                     [&] { return AnyState{QuantumState::thermal_gaussian(p, s1, s2, {xb, pb})}; });
    }
    const double dx = use("state.dx");
    return guarded(scope,
                   [&] { return AnyState{QuantumState::superposition(p, s1, s2, {xb, pb}, dx)}; });
  }
  if (variant == "TT") {
    const double d2 = use("state.delta2");
    return guarded(scope, [&] { return AnyState{QuantumState::thermal_thermal(p, s1, s2, d2)}; });
  }
  if (variant == "Entangled") {
    const double e = use("state.e");
    return guarded(scope, [&] { return AnyState{QuantumState::entangled(p, s1, s2, e)}; });
  }
  const double cc = use("state.c");
  return guarded(scope,
                 [&] { return AnyState{QuantumState::position_correlated(p, s1, s2, cc)}; });
}

void add_prediction(Row& row, const FtPrediction& pred, double beta1) {
  row.emplace_back("closed", format_real(pred.value));
  row.emplace_back("valid", yes_no(pred.valid));
  row.emplace_back("status", pred.status == FtStatus::ok ? "ok" : "divergent");
  row.emplace_back("condition", pred.condition);
  row.emplace_back("condition_margin", format_real(pred.condition_margin));
  const double bound = pred.valid ? jensen_bound(pred, beta1)
                                  : -std::numeric_limits<double>::infinity();
  row.emplace_back("jensen_bound", format_real(bound));
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += items[i];
  }
  return out;
}

void add_estimate(Row& row, const FtEstimate& est, std::uint64_t seed) {
  row.emplace_back("numeric", format_real(est.value));
  row.emplace_back("numeric_error", format_real(est.error));
  row.emplace_back("method",
                   est.method == EstimateMethod::monte_carlo ? "monte_carlo" : "quadrature");
  row.emplace_back("samples", std::to_string(est.count));
  row.emplace_back("seed", est.method == EstimateMethod::monte_carlo ? std::to_string(seed) : "");
  row.emplace_back("effective_sample_size", format_real(est.effective_sample_size));
  row.emplace_back("variance_finite", yes_no(est.variance_finite));
  row.emplace_back("diverged", yes_no(est.diverged));
  row.emplace_back("warnings", join(est.warnings, "; "));
}

void add_no_estimate(Row& row, bool diverged, const std::string& note) {
  row.emplace_back("numeric", format_real(kNaN));
  row.emplace_back("numeric_error", format_real(kNaN));
  row.emplace_back("method", "none");
  row.emplace_back("samples", "0");
  row.emplace_back("seed", "");
  row.emplace_back("effective_sample_size", format_real(kNaN));
  row.emplace_back("variance_finite", "false");
  row.emplace_back("diverged", yes_no(diverged));
  row.emplace_back("warnings", note);
}

QuadratureConfig quadrature_config(const Config& c, unsigned threads) {
  QuadratureConfig q;
  q.radius = c.real("quad.radius", q.radius);
  q.nodes = static_cast<int>(c.integer("quad.nodes", q.nodes));
  q.levels = static_cast<int>(c.integer("quad.levels", q.levels));
  q.threads = threads;
  guarded("quad", [&] { q.validate(); });
  return q;
}

// One result row: closed form next to the numeric estimate.
Row ft_row(const Config& c, const std::string& framework, const std::string& variant,
           std::uint64_t seed, unsigned threads, bool numeric_default, const std::string& id) {
  Row row;
  row.emplace_back("id", id);
  row.emplace_back("framework", framework);
  const ModelParams p = model_params(c);
  Row model;
  add_model(model, p);
  Row proc;
  const ProcessInterval interval = process(c, proc);
  Row snap;
  const AnyState state = prepare(c, framework, variant, p, snap);
  const bool numeric = c.flag("estimator.numeric", numeric_default);

  if (const auto* cs = std::get_if<classical::ClassicalState>(&state)) {
    row.emplace_back("tag", std::string(cs->tag()));
    row.insert(row.end(), model.begin(), model.end());
    row.insert(row.end(), proc.begin(), proc.end());
    row.insert(row.end(), snap.begin(), snap.end());
    FtPrediction pred;
    if (interval.is_generic()) {
      pred.value = kNaN;
      pred.condition_margin = kNaN;
      pred.condition = "closed form needs an odd multiple of tau";
      add_prediction(row, pred, p.beta1());
      row.back().second = format_real(kNaN);
    } else {
      pred = ft_classical(*cs, p);
      add_prediction(row, pred, p.beta1());
    }
    if (numeric) {
      const std::uint64_t n = c.count("estimator.n", 1000000);
      McOptions opts;
      opts.threads = threads;
      const FtEstimate est =
          guarded("estimator.n", [&] { return estimate_mc(*cs, p, interval, n, seed, opts); });
      add_estimate(row, est, seed);
    } else {
      add_no_estimate(row, !pred.valid, "numeric estimate disabled");
    }
    for (const auto& [k, v] : pred.helpers) {
      row.emplace_back("helper." + k, format_real(v));
    }
    return row;
  }

  const auto& qs = std::get<quantum::QuantumState>(state);
  if (interval.is_generic()) {
    throw ConfigError("process.t: quantum states support odd multiples of tau only");
  }
  row.emplace_back("tag", std::string(qs.tag()));
  row.insert(row.end(), model.begin(), model.end());
  row.insert(row.end(), proc.begin(), proc.end());
  row.insert(row.end(), snap.begin(), snap.end());
  const FtPrediction pred = ft_quantum(qs, p);
  add_prediction(row, pred, p.beta1());
  if (numeric) {
    const QuadratureConfig q = quadrature_config(c, threads);
    try {
      add_estimate(row, estimate_quadrature(qs, p, q), seed);
    } catch (const NonIntegrable& e) {
      FtEstimate est;
      est.method = EstimateMethod::quadrature;
      est.value = std::numeric_limits<double>::infinity();
      est.error = kNaN;
      est.effective_sample_size = kNaN;
      est.diverged = true;
      est.variance_finite = false;
      est.warnings.emplace_back(e.what());
      add_estimate(row, est, seed);
    }
  } else {
    add_no_estimate(row, !pred.valid, "numeric estimate disabled");
  }
  for (const auto& [k, v] : pred.helpers) {
    row.emplace_back("helper." + k, format_real(v));
  }
  return row;
}

// Column order: first appearance across rows, helper columns last.
std::vector<std::string> columns_of(const std::vector<Row>& rows,
                                    const std::vector<std::string>& leading = {}) {
  std::vector<std::string> cols = leading;
  std::set<std::string> seen(leading.begin(), leading.end());
  std::set<std::string> helpers;
  for (const auto& row : rows) {
    for (const auto& [k, v] : row) {
      if (k.rfind("helper.", 0) == 0) {
        helpers.insert(k);
      } else if (seen.insert(k).second) {
        cols.push_back(k);
      }
    }
  }
  cols.insert(cols.end(), helpers.begin(), helpers.end());
  return cols;
}

std::string key_value_report(const std::vector<Row>& rows) {
  std::string out = "# columns: " + join(columns_of(rows), ",") + "\n";
  for (const auto& row : rows) {
    out += "\n[row]\n";
    for (const auto& [k, v] : row) {
      out += k + " = " + v + "\n";
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv(const std::vector<Row>& rows, const std::vector<std::string>& leading = {}) {
  const auto cols = columns_of(rows, leading);
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += (i ? "," : "") + csv_field(cols[i]);
  }
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const auto it = std::find_if(row.begin(), row.end(),
                                   [&](const auto& kv) { return kv.first == cols[i]; });
      out += (i ? "," : "") + (it == row.end() ? std::string() : csv_field(it->second));
    }
    out += "\n";
  }
  return out;
}

struct Context {
  const Config& cfg;
  std::uint64_t seed;
  unsigned threads;
};

Report cmd_ft(const Context& ctx) {
  const std::string framework = framework_of(ctx.cfg);
  const auto variants = ctx.cfg.words("state.variant");
  Report rep;
  std::vector<Row> rows;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    const auto start = Clock::now();
    const std::string id = "ft-" + std::to_string(i);
    rows.push_back(ft_row(ctx.cfg, framework, variants[i], ctx.seed, ctx.threads, true, id));
    rep.meta.emplace_back("wall_clock_seconds." + id, format_real(seconds_since(start)));
  }
  rep.body = key_value_report(rows);
  return rep;
}

Report cmd_bk_scan(const Context& ctx) {
  const Config& c = ctx.cfg;
  const std::string name = c.text("bk.family");
  BkFamily family;
  bool found = false;
  std::string names;
  for (auto kind : {BkFamilyKind::classical_tg, BkFamilyKind::classical_tt,
                    BkFamilyKind::classical_corr, BkFamilyKind::classical_corr_critical,
                    BkFamilyKind::quantum_tg, BkFamilyKind::quantum_tt, BkFamilyKind::entangled}) {
    names += (names.empty() ? "" : ", ") + std::string(family_name(kind));
    if (family_name(kind) == name) {
      family.kind = kind;
      found = true;
    }
  }
  if (!found) {
    throw ConfigError("bk.family: unknown family '" + name + "', expected one of " + names);
  }
  family.sigma1 = c.real("state.sigma1", family.sigma1);
  family.sigma2 = c.real("state.sigma2", family.sigma2);
  family.delta2 = c.real("state.delta2", family.delta2);
  family.c = c.real("state.c", family.c);
  family.e = c.real("state.e", family.e);
  const auto ratios = c.reals("bk.ratios");
  const ModelParams base = model_params(c, true);
  const BkScanReport report = guarded("bk", [&] { return bk_scan(family, ratios, base); });
  std::vector<Row> rows;
  for (const auto& r : report.rows) {
    rows.push_back({{"family", name},
                    {"ratio", format_real(r.ratio)},
                    {"m2", format_real(r.m2)},
                    {"deviation", format_real(r.deviation)},
                    {"diverged", yes_no(r.diverged)},
                    {"sensitivity", format_real(r.sensitivity)}});
  }
  return {csv(rows), {}};
}

Report sweep_xi(const Context& ctx) {
  const double gamma = ctx.cfg.real("xi.gamma");
  if (!(gamma > 0.0)) {
    throw ConfigError("xi.gamma: must be positive");
  }
  const auto etas = ctx.cfg.reals("xi.eta");
  const auto ratios = ctx.cfg.reals("xi.ratio");
  std::vector<Row> rows(etas.size() * ratios.size());
  detail::parallel_for(rows.size(), ctx.threads, [&](std::size_t i) {
    const double eta = etas[i / ratios.size()];
    const double r = ratios[i % ratios.size()];
    double xi = kNaN;
    bool ok = true;
    try {
      xi = xi_factor(gamma, eta, r);
    } catch (const DomainError&) {
      ok = false;
    }
    rows[i] = {{"gamma", format_real(gamma)},
               {"eta", format_real(eta)},
               {"ratio", format_real(r)},
               {"in_domain", yes_no(ok)},
               {"xi", format_real(xi)},
               {"attenuation_bound", format_real(std::exp(-eta * eta / 8.0))}};
  });
  return {csv(rows), {}};
}

Report sweep_ft(const Context& ctx) {
  const Config& c = ctx.cfg;
  std::vector<std::string> axes;
  std::vector<std::vector<double>> values;
  for (const std::string n : {"1", "2"}) {
    const std::string axis_key = "sweep.axis" + n;
    if (!c.has(axis_key)) {
      if (c.has("sweep.values" + n)) {
        throw ConfigError("sweep.values" + n + ": set without " + axis_key);
      }
      continue;
    }
    const std::string axis = c.text(axis_key);
    const auto& known = known_keys();
    if (axis.rfind("sweep.", 0) == 0 || std::find(known.begin(), known.end(), axis) == known.end()) {
      throw ConfigError(axis_key + ": '" + axis + "' is not a sweepable key");
    }
    axes.push_back(axis);
    values.push_back(c.reals("sweep.values" + n));
  }
  if (axes.empty()) {
    throw ConfigError("sweep.axis1: required for sweep.kind = ft");
  }
  if (axes.size() == 2 && axes[0] == axes[1]) {
    throw ConfigError("sweep.axis2: duplicates sweep.axis1");
  }
  const std::string framework = framework_of(c);
  const auto variants = c.words("state.variant");
  const std::size_t inner = axes.size() == 2 ? values[1].size() : 1;
  const std::size_t cells = values[0].size() * inner;
  std::vector<std::vector<Row>> out(cells);
  detail::parallel_for(cells, ctx.threads, [&](std::size_t i) {
    Config cell = c;
    Row lead;
    const double a = values[0][i / inner];
    cell.set(axes[0], format_real(a));
    lead.emplace_back(axes[0], format_real(a));
    if (axes.size() == 2) {
      const double b = values[1][i % inner];
      cell.set(axes[1], format_real(b));
      lead.emplace_back(axes[1], format_real(b));
    }
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const std::string id = "cell-" + std::to_string(i) + "-" + std::to_string(v);
      Row row = ft_row(cell, framework, variants[v], ctx.seed, 1, false, id);
      row.erase(std::remove_if(row.begin(), row.end(),
                               [&](const auto& kv) {
                                 return std::find(axes.begin(), axes.end(), kv.first) !=
                                        axes.end();
                               }),
                row.end());
      row.insert(row.begin(), lead.begin(), lead.end());
      out[i].push_back(std::move(row));
    }
  });
  std::vector<Row> rows;
  for (auto& cell : out) {
    for (auto& row : cell) rows.push_back(std::move(row));
  }
  return {csv(rows, axes), {}};
}

Report cmd_sweep(const Context& ctx) {
  const std::string kind = ctx.cfg.text("sweep.kind", "ft");
  if (kind == "ft") return sweep_ft(ctx);
  if (kind == "xi") return sweep_xi(ctx);
  if (kind == "bk") return cmd_bk_scan(ctx);
  throw ConfigError("sweep.kind: expected ft, xi or bk, got '" + kind + "'");
}

std::vector<double> works_of(const TpmRun& run) {
  std::vector<double> out;
  out.reserve(run.records.size());
  for (const auto& r : run.records) out.push_back(r.work);
  return out;
}

Report cmd_tpm(const Context& ctx) {
  const Config& c = ctx.cfg;
  if (framework_of(c, "quantum") != "quantum") {
    throw ConfigError("state.framework: the two-point measurement needs a quantum state");
  }
  const std::string variant = c.text("state.variant");
  if (variant != "Entangled" && variant != "PosCorr") {
    throw ConfigError("state.variant: two-point measurement supports Entangled or PosCorr, got '" +
                      variant + "'");
  }
  const ModelParams p = model_params(c);
  Row row;
  row.emplace_back("id", "tpm-0");
  Row model;
  add_model(model, p);
  Row proc;
  const ProcessInterval interval = process(c, proc);
  if (interval.is_generic()) {
    throw ConfigError("process.t: the two-point measurement needs an odd multiple of tau");
  }
  const std::uint64_t n = c.count("tpm.n", 100000);
  if (n == 0) {
    throw ConfigError("tpm.n: must be at least 1");
  }
  const std::uint64_t ks_n = c.count("tpm.ks_n", std::min<std::uint64_t>(n, 100000));
  if (ks_n == 0) {
    throw ConfigError("tpm.ks_n: must be at least 1");
  }
  const std::uint64_t partner_seed = c.count("tpm.partner_seed", ctx.seed + 1);
  const double s1 = c.real("state.sigma1");
  const double s2 = c.real("state.sigma2");
  const std::string coupling_key = variant == "Entangled" ? "state.e" : "state.c";
  const double coupling = c.real(coupling_key);
  using quantum::QuantumState;
  const auto [ent, pos] = guarded("state", [&] {
    return std::pair{QuantumState::entangled(p, s1, s2, coupling),
                     QuantumState::position_correlated(p, s1, s2, coupling)};
  });
  const QuantumState& state = variant == "Entangled" ? ent : pos;
  const QuantumState& partner = variant == "Entangled" ? pos : ent;

  const std::string records_path = c.text("output.records", "");
  TpmOptions opts;
  opts.threads = ctx.threads;
  opts.keep_records = !records_path.empty();
  const TpmRun main = run_tpm(state, p, interval, n, ctx.seed, opts);
  if (!records_path.empty()) {
    std::ofstream rec(records_path);
    if (!rec) {
      throw IoError("cannot write " + records_path);
    }
    rec << "first,second,work\n";
    for (const auto& r : main.records) {
      rec << format_real(r.first) << ',' << format_real(r.second) << ',' << format_real(r.work)
          << '\n';
    }
    if (!rec) {
      throw IoError("failed writing " + records_path);
    }
  }
  opts.keep_records = true;
  const TpmRun mine = run_tpm(state, p, interval, ks_n, ctx.seed, opts);
  const TpmRun shared = run_tpm(partner, p, interval, ks_n, ctx.seed, opts);
  const TpmRun independent = run_tpm(partner, p, interval, ks_n, partner_seed, opts);
  const double ks_shared = ks_statistic(works_of(mine), works_of(shared));
  const double ks = ks_statistic(works_of(mine), works_of(independent));
  const double critical = ks_critical_value(ks_n, ks_n);

  const FtPrediction closed = ft_quantum(ent, p);
  const FtEstimate& est = main.exp_average;
  const double gap = est.value - closed.value;
  const double z = est.error > 0.0 ? std::abs(gap) / est.error
                                   : std::numeric_limits<double>::infinity();

  row.emplace_back("tag", main.tag);
  row.emplace_back("partner", std::string(partner.tag()));
  row.insert(row.end(), model.begin(), model.end());
  row.insert(row.end(), proc.begin(), proc.end());
  row.emplace_back("state.sigma1", format_real(s1));
  row.emplace_back("state.sigma2", format_real(s2));
  row.emplace_back(coupling_key, format_real(coupling));
  row.emplace_back("epsilon", format_real(state.epsilon()));
  row.emplace_back("theta_e", format_real(quantum::correlation_theta(ent)));
  row.emplace_back("n", std::to_string(n));
  row.emplace_back("seed", std::to_string(ctx.seed));
  row.emplace_back("exp_average", format_real(est.value));
  row.emplace_back("exp_average_error", format_real(est.error));
  row.emplace_back("effective_sample_size", format_real(est.effective_sample_size));
  row.emplace_back("diverged", yes_no(est.diverged));
  row.emplace_back("exact_chain", format_real(tpm_exp_average_exact(state, p)));
  row.emplace_back("closed_entangled", format_real(closed.value));
  row.emplace_back("closed_valid", yes_no(closed.valid));
  row.emplace_back("gap", format_real(gap));
  row.emplace_back("z_score", format_real(z));
  row.emplace_back("gap_significant", yes_no(z > 5.0));
  row.emplace_back("ks_n", std::to_string(ks_n));
  row.emplace_back("partner_seed", std::to_string(partner_seed));
  row.emplace_back("ks_statistic", format_real(ks));
  row.emplace_back("ks_critical", format_real(critical));
  row.emplace_back("ks_pass", yes_no(ks < critical));
  row.emplace_back("ks_shared_seed", format_real(ks_shared));
  row.emplace_back("shared_seed_identical", yes_no(mine.records == shared.records));
  return {key_value_report({row}), {}};
}

Report cmd_entanglement(const Context& ctx) {
  const Config& c = ctx.cfg;
  const ModelParams p = model_params(c);
  const double s1 = c.real("state.sigma1");
  const double s2 = c.real("state.sigma2");
  const auto grid = c.reals("entanglement.e");
  const bool oracle = c.flag("entanglement.oracle", true);
  PurityGrid pg;
  pg.radius = c.real("purity.radius", pg.radius);
  pg.nodes = static_cast<int>(c.integer("purity.nodes", pg.nodes));
  pg.tolerance = c.real("purity.tolerance", pg.tolerance);
  if (!(s1 > 0.0)) {
    throw ConfigError("state.sigma1: must be positive");
  }
  const double eps = s1 / p.delta1();
  const auto scan = guarded("entanglement.e",
                            [&] { return monotonicity_scan(eps, s1, s2, grid, p.hbar()); });
  std::vector<double> values(grid.size(), kNaN);
  std::vector<char> ok(grid.size(), 0);
  if (oracle) {
    guarded("purity", [&] {
      detail::parallel_for(grid.size(), ctx.threads, [&](std::size_t i) {
        const auto state = quantum::QuantumState::entangled(p, s1, s2, grid[i]);
        try {
          values[i] = purity_oracle(state, pg);
          ok[i] = 1;
        } catch (const GridTooCoarse&) {
          ok[i] = 0;
        }
      });
    });
  }
  std::vector<Row> rows;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const auto& r = scan[i];
    rows.push_back({{"e", format_real(r.e)},
                    {"epsilon", format_real(r.epsilon)},
                    {"theta_e", format_real(r.theta_e)},
                    {"closed", format_real(r.closed)},
                    {"rescaled", format_real(r.rescaled)},
                    {"oracle", format_real(values[i])},
                    {"oracle_ok", yes_no(ok[i] != 0)},
                    {"abs_diff", format_real(std::abs(values[i] - r.closed))}});
  }
  return {csv(rows), {}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw IoError("cannot write " + path);
  }
  f << text;
  f.flush();
  if (!f) {
    throw IoError("failed writing " + path);
  }
}

}  // namespace

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"ft", "sweep", "tpm", "entanglement", "bk-scan"};
  return names;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "model.m1",       "model.m2",         "model.k",          "model.beta1",
      "model.hbar",     "process.v",        "process.t",        "state.framework",
      "state.variant",  "state.sigma1",     "state.sigma2",     "state.xbar2",
      "state.pbar2",    "state.delta2",     "state.c",          "state.e",
      "state.dx",       "state.x1_width",   "state.x2_width",   "estimator.n",
      "estimator.seed", "estimator.numeric", "quad.radius",     "quad.nodes",
      "quad.levels",    "sweep.kind",       "sweep.axis1",      "sweep.values1",
      "sweep.axis2",    "sweep.values2",    "xi.gamma",         "xi.eta",
      "xi.ratio",       "bk.family",        "bk.ratios",        "tpm.n",
      "tpm.partner_seed", "tpm.ks_n",       "entanglement.e",   "entanglement.oracle",
      "purity.radius",  "purity.nodes",     "purity.tolerance", "output.records"};
  return keys;
}

int run(std::string_view command, const Config& config, const RunOptions& options,
        std::ostream& out, std::ostream& err) {
  try {
    const auto started = Clock::now();
    const std::string started_utc = utc_now();
    Config cfg = config;
    if (options.seed) {
      cfg.set("estimator.seed", std::to_string(*options.seed));
    }
    cfg.check_known(known_keys());
    const Context ctx{cfg, cfg.count("estimator.seed", 1), detail::resolve_threads(options.threads)};
    Report rep;
    if (command == "ft") {
      rep = cmd_ft(ctx);
    } else if (command == "sweep") {
      rep = cmd_sweep(ctx);
    } else if (command == "tpm") {
      rep = cmd_tpm(ctx);
    } else if (command == "entanglement") {
      rep = cmd_entanglement(ctx);
    } else if (command == "bk-scan") {
      rep = cmd_bk_scan(ctx);
    } else {
      throw ConfigError("unknown command '" + std::string(command) + "'");
    }
    if (options.out.empty()) {
      out << rep.body;
      out.flush();
      if (!out) {
        throw IoError("failed writing standard output");
      }
      return kExitOk;
    }
    write_file(options.out, rep.body);
    std::string meta = "command = " + std::string(command) + "\n";
    meta += "started_utc = " + started_utc + "\n";
    meta += "threads = " + std::to_string(ctx.threads) + "\n";
    meta += "wall_clock_seconds = " + format_real(seconds_since(started)) + "\n";
    for (const auto& [k, v] : rep.meta) {
      meta += k + " = " + v + "\n";
    }
    for (const auto& [k, v] : cfg.entries()) {
      meta += "config." + k + " = " + v + "\n";
    }
    write_file(options.out + ".meta", meta);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace flucto::cli
