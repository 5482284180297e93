#include "mel/cli.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mel/bounds.hpp"
#include "mel/entropy.hpp"
#include "mel/error.hpp"
#include "mel/implicit.hpp"
#include "mel/matroid.hpp"
#include "mel/pointset.hpp"

namespace mel::cli {

namespace {

using nlohmann::ordered_json;

std::uint32_t parse_u32(std::string_view s, const std::string& what) {
  std::uint32_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw DomainError("bad " + what + " '" + std::string(s) + "'");
  return v;
}

std::uint32_t single_extension(const RunConfig& c) {
  if (c.extensions.size() != 1) throw DomainError("this subcommand takes exactly one --ext");
  return c.extensions.front();
}

bounds::AnalysisOptions analysis_options(const RunConfig& c) {
  bounds::AnalysisOptions o;
  o.grid_guard = c.grid_guard;
  o.workers = std::max(1u, c.workers);
  return o;
}

std::string quoted(const std::string& s) { return '"' + s + '"'; }

void dump(std::ostream& out, const ordered_json& j) { out << j.dump(2) << '\n'; }

int cmd_info(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const auto opts = analysis_options(c);
  const auto a = bounds::analyze(inst, opts);
  const auto th = bounds::thresholds(a.delta.value);
  bool separable = true;
  for (std::uint32_t bits = 1; bits < (1u << inst.n()); ++bits)
    if (matroid::jacobian_rank(inst, SubsetMask(bits), c.jacobian_trials, c.seed) < (*a.ranks)(SubsetMask(bits)))
      separable = false;
  std::vector<std::pair<std::string, ordered_json>> kv = {
      {"instance", inst.name},
      {"p", inst.base->characteristic()},
      {"k", inst.base->degree()},
      {"q0", inst.q0()},
      {"s", inst.s},
      {"n", inst.n()},
      {"d", inst.d()},
      {"m", a.m},
      {"delta", a.delta.value},
      {"delta_source", to_string(a.delta.source)},
      {"threshold_nonempty", th.nonempty},
      {"threshold_langweil", th.langweil},
      {"circuits", a.circuits.size()},
      {"free_matroid", a.free()},
      {"separable", separable},
  };
  if (c.format == Format::csv) {
    out << "key,value\n";
    for (const auto& [k, v] : kv) {
      std::string text;
      if (v.is_string())
        text = v.get<std::string>();
      else if (v.is_boolean())
        text = v.get<bool>() ? "yes" : "no";
      else if (v.is_number_float())
        text = bounds::format_number(v.get<double>());
      else
        text = v.dump();
      out << k << ',' << text << '\n';
    }
  } else {
    ordered_json j;
    for (const auto& [k, v] : kv) j[k] = v;
    dump(out, j);
  }
  return kExitOk;
}

int cmd_rank(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const matroid::Matroid M(inst, analysis_options(c).oracle());
  const auto table = matroid::rank_table(M);
  ordered_json rows = ordered_json::array();
  if (c.format == Format::csv) out << "subset,r,independent,jacobian_rank\n";
  for (std::uint32_t bits = 0; bits < (1u << inst.n()); ++bits) {
    const SubsetMask A(bits);
    const auto r = table(A);
    const auto jr = matroid::jacobian_rank(inst, A, c.jacobian_trials, c.seed);
    if (c.format == Format::csv)
      out << quoted(to_string(A)) << ',' << r << ',' << (r == A.size() ? "yes" : "no") << ',' << jr << '\n';
    else
      rows.push_back({{"subset", to_string(A)}, {"r", r}, {"independent", r == A.size()}, {"jacobian_rank", jr}});
  }
  if (c.format != Format::csv) dump(out, {{"instance", inst.name}, {"m", table.m()}, {"ranks", rows}});
  return kExitOk;
}

int cmd_circuits(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const matroid::Matroid M(inst, analysis_options(c).oracle());
  const auto cs = matroid::circuits(M);
  if (c.format == Format::csv) {
    out << "circuit\n";
    for (auto C : cs) out << quoted(to_string(C)) << '\n';
  } else {
    ordered_json arr = ordered_json::array();
    for (auto C : cs) arr.push_back(to_string(C));
    dump(out, {{"instance", inst.name}, {"circuits", arr}});
  }
  return kExitOk;
}

int cmd_annihilator(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const auto opts = analysis_options(c);
  std::vector<mpoly::MPoly> polys;
  if (!c.circuit.empty()) {
    const SubsetMask C = parse_subset(c.circuit, inst.n());
    std::uint32_t D;
    if (c.degree) {
      D = *c.degree;
    } else {
      D = bounds::analyze(inst, opts).delta.value;
    }
    polys.push_back(implicit::circuit_annihilator(inst, C, D, opts.oracle().implicit()));
  } else if (!c.subset.empty()) {
    if (!c.degree) throw DomainError("--subset needs --degree");
    const SubsetMask A = parse_subset(c.subset, inst.n());
    polys = implicit::annihilator_space(inst, A, *c.degree, opts.oracle().implicit()).basis;
  } else {
    throw DomainError("annihilator needs --circuit or --subset");
  }
  if (c.format == Format::csv) {
    for (const auto& g : polys) out << mpoly::render(g) << '\n';
  } else {
    ordered_json arr = ordered_json::array();
    for (const auto& g : polys) arr.push_back(mpoly::render(g));
    dump(out, {{"instance", inst.name}, {"annihilators", arr}});
  }
  return kExitOk;
}

ordered_json element_json(const gf::Field& F, gf::Code code) {
  if (F.degree() == 1) return code;
  return F.coeffs(code);
}

int cmd_points(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const auto opts = analysis_options(c);
  const std::uint32_t k = single_extension(c);
  pointset::PointSet ps;
  if (c.image) {
    ps = pointset::image_points(inst, k, opts.points());
  } else {
    const auto a = bounds::analyze(inst, opts);
    ps = pointset::variety_points(inst, k, a.variety_basis, opts.points());
  }
  const gf::Field& F = *ps.field;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto p = ps.point(i);
    if (c.format == Format::csv) {
      for (std::size_t t = 0; t < p.size(); ++t) {
        if (t) out << ',';
        out << (F.degree() == 1 ? F.render(p[t]) : quoted(F.render(p[t])));
      }
      out << '\n';
    } else {
      ordered_json arr = ordered_json::array();
      for (auto v : p) arr.push_back(element_json(F, v));
      out << arr.dump() << '\n';
    }
  }
  return kExitOk;
}

int cmd_entropy(const RunConfig& c, const Instance& inst, std::ostream& out) {
  const auto opts = analysis_options(c);
  const std::uint32_t k = single_extension(c);
  const auto a = bounds::analyze(inst, opts);
  const auto V = pointset::variety_points(inst, k, a.variety_basis, opts.points());
  const auto table = entropy::polymatroid(V, opts.workers);
  const auto axioms = entropy::check_polymatroid_axioms(table);
  ordered_json rows = ordered_json::array();
  if (c.format == Format::csv) out << "subset,r,h,H_nats,fibers\n";
  for (std::uint32_t bits = 0; bits < (1u << inst.n()); ++bits) {
    const SubsetMask A(bits);
    if (c.format == Format::csv)
      out << quoted(to_string(A)) << ',' << (*a.ranks)(A) << ',' << bounds::format_number(table.h[bits]) << ','
          << bounds::format_number(table.H[bits]) << ',' << table.fibers[bits] << '\n';
    else
      rows.push_back({{"subset", to_string(A)},
                      {"r", (*a.ranks)(A)},
                      {"h", table.h[bits]},
                      {"H_nats", table.H[bits]},
                      {"fibers", table.fibers[bits]}});
  }
  if (c.format != Format::csv)
    dump(out, {{"instance", inst.name},
               {"k", k},
               {"q", table.q},
               {"points", table.N},
               {"axioms_pass", axioms.ok()},
               {"subsets", rows}});
  if (!axioms.ok()) return kExitBoundFailure;
  return kExitOk;
}

void report_failures(const bounds::BoundReport& rep, std::ostream& err) {
  for (const auto& e : rep.extensions) {
    if (!e.nonempty_ok) err << "FAIL " << rep.instance << " k=" << e.k << ": V(F) empty above 2 delta^4\n";
    if (!e.lower_ok) err << "FAIL " << rep.instance << " k=" << e.k << ": |V(F)| = " << e.N << " below Lang-Weil lower bound\n";
    if (!e.upper_ok) err << "FAIL " << rep.instance << " k=" << e.k << ": |V(F)| = " << e.N << " above delta q^m\n";
    if (!e.axioms.ok())
      err << "FAIL " << rep.instance << " k=" << e.k << ": polymatroid axioms: " << e.axioms.normalized.witness
          << e.axioms.bounded.witness << e.axioms.monotone.witness << e.axioms.submodular.witness << '\n';
    for (const auto& r : e.rows)
      if (!r.pass)
        err << "FAIL " << rep.instance << ',' << e.k << ',' << e.q << ",\"" << to_string(r.subset) << "\","
            << r.r << ',' << bounds::format_number(r.h) << ": " << r.failure << '\n';
    for (const auto& cr : e.cond)
      if (!cr.pass)
        err << "FAIL " << rep.instance << " k=" << e.k << ": H(" << cr.j + 1 << " | " << to_string(cr.circuit.without(cr.j))
            << ") = " << bounds::format_number(cr.H) << " above COND_ENTROPY\n";
  }
}

int cmd_verify(const RunConfig& c, const Instance& inst, std::ostream& out, std::ostream& err) {
  if (c.extensions.empty()) throw DomainError("no extension degrees given");
  const auto opts = analysis_options(c);
  const auto a = bounds::analyze(inst, opts);
  spdlog::info("{}: n={} m={} delta={} ({})", inst.name, inst.n(), a.m, a.delta.value, to_string(a.delta.source));
  spdlog::info("{}: verifying {} extension degree(s)", inst.name, c.extensions.size());
  const auto rep = bounds::verify(a, c.extensions, opts);
  if (c.format == Format::csv)
    bounds::write_csv(out, rep);
  else
    dump(out, bounds::to_json(rep));
  if (!rep.pass()) {
    report_failures(rep, err);
    return kExitBoundFailure;
  }
  return kExitOk;
}

}  // namespace

std::vector<std::uint32_t> parse_ext_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw DomainError("extension range must look like a..b");
  const std::uint32_t a = parse_u32(std::string_view(text).substr(0, dots), "range start");
  const std::uint32_t b = parse_u32(std::string_view(text).substr(dots + 2), "range end");
  if (a < 1 || b < a) throw DomainError("extension range needs 1 <= a <= b");
  std::vector<std::uint32_t> out;
  for (std::uint32_t k = a; k <= b; ++k) out.push_back(k);
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    for (auto k : config.extensions)
      if (k < 1) throw DomainError("extension degrees must be at least 1");
    if (config.grid_guard == 0) throw DomainError("grid guard must be positive");
    if (config.format == Format::jsonl && config.command != Command::points)
      throw DomainError("jsonl output is only available for points");
    if (config.format == Format::json && config.command == Command::points)
      throw DomainError("points supports csv and jsonl");
    ParseOptions popts;
    popts.grid_guard = config.grid_guard;
    popts.force = config.force;
    popts.allow_loops = config.allow_loops;
    const Instance inst = load_instance(config.instance_path, popts);

    std::ofstream file;
    std::ostringstream buffer;
    std::ostream& sink = config.out ? static_cast<std::ostream&>(buffer) : out;
    int code = kExitOk;
    switch (config.command) {
      case Command::info:
        code = cmd_info(config, inst, sink);
        break;
      case Command::rank:
        code = cmd_rank(config, inst, sink);
        break;
      case Command::circuits:
        code = cmd_circuits(config, inst, sink);
        break;
      case Command::annihilator:
        code = cmd_annihilator(config, inst, sink);
        break;
      case Command::points:
        code = cmd_points(config, inst, sink);
        break;
      case Command::entropy:
        code = cmd_entropy(config, inst, sink);
        break;
      case Command::verify:
      case Command::sweep:
        code = cmd_verify(config, inst, sink, err);
        break;
    }
    if (config.out) {
      file.open(*config.out, std::ios::binary);
      if (!file) throw DomainError("cannot write " + config.out->string());
      file << buffer.str();
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace mel::cli
