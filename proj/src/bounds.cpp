#include "mel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mel/error.hpp"

namespace mel::bounds {

namespace {

using entropy::kEpsNum;

double lw_term(std::uint32_t delta, std::uint64_t q) {
  return 5.0 * std::pow(static_cast<double>(delta), 7.0 / 3.0) / std::sqrt(static_cast<double>(q));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

// NA when the bound does not apply to the subset's class, "inapplicable" below threshold.
std::string bound_cell(const std::optional<double>& value, bool class_applies) {
  if (!class_applies) return "NA";
  return value ? format_number(*value) : "inapplicable";
}

nlohmann::ordered_json bound_json(const std::optional<double>& value, bool class_applies) {
  if (!class_applies) return nullptr;
  if (!value) return "inapplicable";
  return *value;
}

bool is_independent(SubsetClass c) { return c == SubsetClass::base || c == SubsetClass::independent; }

}  // namespace

std::string to_string(Variant v) {
  switch (v) {
    case Variant::MAIN_INTRO:
      return "MAIN_INTRO";
    case Variant::SEC4_FINAL:
      return "SEC4_FINAL";
    case Variant::CONCLUSIONS:
      return "CONCLUSIONS";
    case Variant::BASE_THM:
      return "BASE_THM";
    case Variant::INDEP_COR:
      return "INDEP_COR";
    case Variant::CIRCUIT_COR:
      return "CIRCUIT_COR";
    case Variant::DEP_LEMMA:
      return "DEP_LEMMA";
    case Variant::COND_ENTROPY:
      return "COND_ENTROPY";
  }
  return "?";
}

Thresholds thresholds(std::uint32_t delta) {
  if (delta < 1) throw DomainError("delta must be at least 1");
  const double d = delta;
  const double lw = 5.0 * std::pow(d, 7.0 / 3.0) + 1.0;
  return {2.0 * d * d * d * d, lw * lw};
}

bool above_langweil(std::uint32_t delta, std::uint64_t q) {
  return static_cast<double>(q) > thresholds(delta).langweil;
}

LangWeil langweil_bounds(std::uint32_t m, std::uint32_t delta, std::uint64_t q) {
  const double qm = std::pow(static_cast<double>(q), static_cast<double>(m));
  const double c = 5.0 * std::pow(static_cast<double>(delta), 7.0 / 3.0);
  return {qm - c * std::pow(static_cast<double>(q), static_cast<double>(m) - 0.5), static_cast<double>(delta) * qm};
}

std::optional<double> deviation_bound(Variant v, std::size_t n, std::uint32_t m, std::uint32_t delta,
                                      std::uint64_t q) {
  if (!above_langweil(delta, q)) return std::nullopt;
  const double N = static_cast<double>(n), M = m, d = delta, Q = static_cast<double>(q);
  const double ln_q = std::log(Q), sq = std::sqrt(Q);
  const double tail = -std::log(1.0 - lw_term(delta, q)) / ln_q;
  switch (v) {
    case Variant::MAIN_INTRO:
      return N * M * d * d / sq + N * std::log(d) / ln_q + tail;
    case Variant::SEC4_FINAL:
      return N * d * d / sq + N * std::log(d) / ln_q + tail;
    case Variant::CONCLUSIONS:
      return N * M * d * d / sq + N * M * std::log(d * d) / ln_q + tail;
    case Variant::BASE_THM:
    case Variant::INDEP_COR:
      return tail + std::log(d * d) / ln_q + N * M * d * d / sq;
    case Variant::CIRCUIT_COR:
      return d * d / sq + std::log(d) / ln_q;
    case Variant::DEP_LEMMA:
      return N * (d * d / sq + std::log(d) / ln_q);
    case Variant::COND_ENTROPY:
      return d * d / sq * ln_q + std::log(d);
  }
  return std::nullopt;
}

Analysis analyze(const Instance& instance, const AnalysisOptions& options) {
  Analysis a;
  a.instance = &instance;
  a.matroid = std::make_unique<matroid::Matroid>(instance, options.oracle());
  a.ranks = matroid::rank_table(*a.matroid);
  a.circuits = matroid::circuits(*a.matroid);
  a.m = a.ranks->m();
  const auto implicit_opts = options.oracle().implicit();
  if (instance.n() == static_cast<std::size_t>(a.m) + 1)
    a.hypersurface_delta = implicit::hypersurface_degree(instance, a.m, implicit_opts);
  a.delta = delta_of(instance, a.m, a.hypersurface_delta);
  const SubsetMask E = SubsetMask::full(instance.n());
  if (a.free()) {
    a.variety_basis.varsubset = E;
  } else {
    a.variety_basis = implicit::annihilator_space(instance, E, a.delta.value, implicit_opts);
    if (a.variety_basis.empty())
      throw SoundnessError("no relation of degree <= delta = " + std::to_string(a.delta.value) +
                           " although rank(E) < n");
  }
  return a;
}

std::string to_string(SubsetClass c) {
  switch (c) {
    case SubsetClass::base:
      return "base";
    case SubsetClass::independent:
      return "independent";
    case SubsetClass::circuit:
      return "circuit";
    case SubsetClass::dependent:
      return "dependent";
  }
  return "?";
}

SubsetClass classify(const Analysis& analysis, SubsetMask A) {
  const auto r = (*analysis.ranks)(A);
  if (r == A.size()) return r == analysis.m ? SubsetClass::base : SubsetClass::independent;
  if (std::find(analysis.circuits.begin(), analysis.circuits.end(), A) != analysis.circuits.end())
    return SubsetClass::circuit;
  return SubsetClass::dependent;
}

bool ExtensionReport::pass() const {
  return nonempty_ok && lower_ok && upper_ok && axioms.ok() &&
         std::all_of(rows.begin(), rows.end(), [](const SubsetRow& r) { return r.pass; }) &&
         std::all_of(cond.begin(), cond.end(), [](const CondRow& c) { return c.pass; });
}

bool BoundReport::pass() const {
  return std::all_of(extensions.begin(), extensions.end(), [](const ExtensionReport& e) { return e.pass(); });
}

ExtensionReport verify_extension(const Analysis& analysis, std::uint32_t k, const AnalysisOptions& options) {
  const Instance& inst = *analysis.instance;
  const std::size_t n = inst.n();
  const std::uint32_t m = analysis.m;
  const std::uint32_t delta = analysis.delta.value;

  const auto V = pointset::variety_points(inst, k, analysis.variety_basis, options.points());
  const auto table = entropy::polymatroid(V, options.workers);

  ExtensionReport ext;
  ext.k = k;
  ext.q = V.field->size();
  ext.N = V.size();
  ext.langweil = langweil_bounds(m, delta, ext.q);
  ext.thresholds = thresholds(delta);
  ext.applicable = above_langweil(delta, ext.q);
  ext.axioms = entropy::check_polymatroid_axioms(table);
  ext.nonempty_ok = static_cast<double>(ext.q) < ext.thresholds.nonempty || ext.N > 0;
  unsigned __int128 upper = delta;
  for (std::uint32_t i = 0; i < m; ++i) upper *= ext.q;
  ext.upper_ok = ext.N <= upper;
  ext.lower_ok = !ext.applicable || static_cast<double>(ext.N) >= ext.langweil.lower;

  const auto main = deviation_bound(Variant::MAIN_INTRO, n, m, delta, ext.q);
  const auto sec4 = deviation_bound(Variant::SEC4_FINAL, n, m, delta, ext.q);
  const auto concl = deviation_bound(Variant::CONCLUSIONS, n, m, delta, ext.q);
  const auto base = deviation_bound(Variant::BASE_THM, n, m, delta, ext.q);
  const auto indep = deviation_bound(Variant::INDEP_COR, n, m, delta, ext.q);
  const auto circ = deviation_bound(Variant::CIRCUIT_COR, n, m, delta, ext.q);
  const auto dep = deviation_bound(Variant::DEP_LEMMA, n, m, delta, ext.q);

  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    const SubsetMask A(bits);
    SubsetRow row;
    row.subset = A;
    row.cls = classify(analysis, A);
    row.r = (*analysis.ranks)(A);
    row.h = table(A);
    const double diff = row.h - row.r;
    row.dev = std::fabs(diff);
    row.main = main;
    row.sec4 = sec4;
    row.concl = concl;
    auto check = [&](bool ok, const std::string& what) {
      if (!ok && row.pass) row.failure = what;
      row.pass = row.pass && ok;
    };
    if (is_independent(row.cls)) {
      row.base = row.cls == SubsetClass::base ? base : indep;
      check(diff <= kEpsNum, "h > r on an independent set");
      if (row.base) check(row.dev <= *row.base + kEpsNum, "|h - r| above " + to_string(row.cls == SubsetClass::base ? Variant::BASE_THM : Variant::INDEP_COR));
    } else {
      if (row.cls == SubsetClass::circuit) {
        row.circ = circ;
        if (circ) check(diff <= *circ + kEpsNum, "h - r above CIRCUIT_COR");
      }
      row.dep = dep;
      if (dep) check(diff <= *dep + kEpsNum, "h - r above DEP_LEMMA");
    }
    if (main) check(row.dev <= *main + kEpsNum, "|h - r| above MAIN_INTRO");
    ext.max_dev = std::max(ext.max_dev, row.dev);
    ext.rows.push_back(std::move(row));
  }

  const double ln_q = std::log(static_cast<double>(ext.q));
  const auto cond_bound = deviation_bound(Variant::COND_ENTROPY, n, m, delta, ext.q);
  for (const SubsetMask C : analysis.circuits) {
    for (auto j : C.elements()) {
      CondRow c;
      c.circuit = C;
      c.j = j;
      c.H = table.H[C.bits()] - table.H[C.without(j).bits()];
      c.bound = cond_bound;
      c.pass = c.H >= -kEpsNum && c.H <= ln_q + kEpsNum && (!c.bound || c.H <= *c.bound + kEpsNum);
      ext.cond.push_back(c);
    }
  }
  return ext;
}

namespace {

double fit_rms(std::span<const std::uint64_t> qs, std::span<const double> devs, double a, double b) {
  double ss = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double q = static_cast<double>(qs[i]);
    const double e = devs[i] - a / std::log(q) - b / std::sqrt(q);
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(qs.size()));
}

}  // namespace

std::optional<RateFit> fit_rate(std::span<const std::uint64_t> qs, std::span<const double> devs) {
  if (qs.size() != devs.size()) throw DomainError("fit needs one deviation per field size");
  double sxx = 0, sxy = 0, syy = 0, sxd = 0, syd = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double x = 1.0 / std::log(static_cast<double>(qs[i]));
    const double y = 1.0 / std::sqrt(static_cast<double>(qs[i]));
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sxd += x * devs[i];
    syd += y * devs[i];
  }
  const double det = sxx * syy - sxy * sxy;
  if (qs.size() < 2 || std::fabs(det) <= 1e-15 * sxx * syy) return std::nullopt;
  RateFit f{(sxd * syy - syd * sxy) / det, (syd * sxx - sxd * sxy) / det};
  f.rms = fit_rms(qs, devs, f.a, f.b);
  return f;
}

std::optional<RateFit> fit_rate_nonnegative(std::span<const std::uint64_t> qs, std::span<const double> devs) {
  auto free = fit_rate(qs, devs);
  if (!free || free->nonnegative()) return free;
  // Two-variable NNLS: the optimum lies on an axis; take the better one-term fit.
  double sxx = 0, syy = 0, sxd = 0, syd = 0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const double x = 1.0 / std::log(static_cast<double>(qs[i]));
    const double y = 1.0 / std::sqrt(static_cast<double>(qs[i]));
    sxx += x * x;
    syy += y * y;
    sxd += x * devs[i];
    syd += y * devs[i];
  }
  RateFit only_a{std::max(0.0, sxd / sxx), 0};
  RateFit only_b{0, std::max(0.0, syd / syy)};
  only_a.rms = fit_rms(qs, devs, only_a.a, 0);
  only_b.rms = fit_rms(qs, devs, 0, only_b.b);
  return only_a.rms <= only_b.rms ? only_a : only_b;
}

BoundReport verify(const Analysis& analysis, std::span<const std::uint32_t> extensions,
                   const AnalysisOptions& options) {
  BoundReport rep;
  rep.instance = analysis.instance->name;
  rep.n = analysis.instance->n();
  rep.m = analysis.m;
  rep.delta = analysis.delta;
  std::vector<std::uint64_t> qs;
  std::vector<double> devs;
  for (const auto k : extensions) {
    rep.extensions.push_back(verify_extension(analysis, k, options));
    const auto& e = rep.extensions.back();
    if (rep.extensions.size() > 1 && e.max_dev > rep.extensions[rep.extensions.size() - 2].max_dev + kEpsNum)
      rep.max_dev_nonincreasing = false;
    qs.push_back(e.q);
    devs.push_back(e.max_dev);
  }
  rep.fit = fit_rate(qs, devs);
  rep.fit_nonnegative = fit_rate_nonnegative(qs, devs);
  return rep;
}

std::string format_number(double x) {
  if (x == 0) x = 0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

void write_csv(std::ostream& out, const BoundReport& report, bool header) {
  if (header) out << kCsvHeader << '\n';
  for (const auto& e : report.extensions) {
    for (const auto& r : e.rows) {
      const bool indep = is_independent(r.cls);
      out << csv_field(report.instance) << ',' << e.k << ',' << e.q << ',' << quoted(to_string(r.subset)) << ','
          << r.r << ',' << format_number(r.h) << ',' << format_number(r.dev) << ',' << bound_cell(r.main, true) << ','
          << bound_cell(r.sec4, true) << ',' << bound_cell(r.concl, true) << ',' << bound_cell(r.base, indep) << ','
          << bound_cell(r.circ, r.cls == SubsetClass::circuit) << ',' << bound_cell(r.dep, !indep) << ','
          << (e.applicable ? "yes" : "no") << ',' << (r.pass ? "yes" : "no") << '\n';
    }
  }
}

nlohmann::ordered_json to_json(const BoundReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["instance"] = report.instance;
  j["n"] = report.n;
  j["m"] = report.m;
  j["delta"] = report.delta.value;
  j["delta_source"] = to_string(report.delta.source);
  j["pass"] = report.pass();
  j["max_dev_nonincreasing"] = report.max_dev_nonincreasing;
  auto fit_json = [](const std::optional<RateFit>& f) -> ordered_json {
    if (!f) return nullptr;
    return {{"a_over_ln_q", f->a}, {"b_over_sqrt_q", f->b}, {"rms", f->rms}, {"nonnegative", f->nonnegative()}};
  };
  j["rate_fit"] = fit_json(report.fit);
  j["rate_fit_nonnegative"] = fit_json(report.fit_nonnegative);
  j["extensions"] = ordered_json::array();
  for (const auto& e : report.extensions) {
    ordered_json x;
    x["k"] = e.k;
    x["q"] = e.q;
    x["points"] = e.N;
    x["langweil_lower"] = e.langweil.lower;
    x["langweil_upper"] = e.langweil.upper;
    x["threshold_nonempty"] = e.thresholds.nonempty;
    x["threshold_langweil"] = e.thresholds.langweil;
    x["applicable"] = e.applicable;
    x["count_checks"] = {{"nonempty", e.nonempty_ok}, {"lower", e.lower_ok}, {"upper", e.upper_ok}};
    x["axioms"] = {{"normalized", e.axioms.normalized.pass},
                   {"bounded", e.axioms.bounded.pass},
                   {"monotone", e.axioms.monotone.pass},
                   {"submodular", e.axioms.submodular.pass},
                   {"submodular_worst_slack", e.axioms.submodular.worst_slack}};
    x["max_dev"] = e.max_dev;
    x["pass"] = e.pass();
    x["subsets"] = ordered_json::array();
    for (const auto& r : e.rows) {
      const bool indep = is_independent(r.cls);
      ordered_json row;
      row["instance"] = report.instance;
      row["k"] = e.k;
      row["q"] = e.q;
      row["subset"] = to_string(r.subset);
      row["class"] = to_string(r.cls);
      row["r"] = r.r;
      row["h"] = r.h;
      row["dev"] = r.dev;
      row["bound_main"] = bound_json(r.main, true);
      row["bound_sec4"] = bound_json(r.sec4, true);
      row["bound_concl"] = bound_json(r.concl, true);
      row["bound_base"] = bound_json(r.base, indep);
      row["bound_circ"] = bound_json(r.circ, r.cls == SubsetClass::circuit);
      row["bound_dep"] = bound_json(r.dep, !indep);
      row["applicable"] = e.applicable;
      row["pass"] = r.pass;
      if (!r.pass) row["failure"] = r.failure;
      x["subsets"].push_back(std::move(row));
    }
    x["conditional"] = ordered_json::array();
    for (const auto& c : e.cond) {
      x["conditional"].push_back({{"circuit", to_string(c.circuit)},
                                  {"j", c.j + 1},
                                  {"H_nats", c.H},
                                  {"bound_cond", c.bound ? ordered_json(*c.bound) : ordered_json("inapplicable")},
                                  {"pass", c.pass}});
    }
    j["extensions"].push_back(std::move(x));
  }
  return j;
}

}  // namespace mel::bounds
