#include "sicladder/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "sicladder/arith.hpp"
#include "sicladder/catalog.hpp"
#include "sicladder/clifford.hpp"
#include "sicladder/etf.hpp"
#include "sicladder/io.hpp"
#include "sicladder/search.hpp"

namespace sicladder::cli {

namespace {

using io::Json;

// Dimensions above these get sampled or skipped checks in `wh check`.
constexpr long kDefaultMaxPairs = 200000;
constexpr int kGrassmannMaxDim = 51;

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

std::string real(double x) { return io::format_real(x); }

// Human-mode numbers; JSON mode carries the full 17 digits.
std::string brief(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

void emit(const Streams& s, const Json& j) { s.out << io::dump(j); }

// One row of a pass/fail table.
struct Row {
  std::string name;
  double value = 0;
  double limit = 0;
  bool pass = false;
  std::string note;
};

Row residual_row(std::string name, double value, double limit) {
  return {std::move(name), value, limit, value < limit, {}};
}

int report_rows(const Streams& s, const std::string& title, const Json& header, const std::vector<Row>& rows,
                bool json) {
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.pass; });
  if (json) {
    Json j = header;
    Json list = Json::array();
    for (const auto& r : rows) {
      Json row = Json::object();
      row["name"] = r.name;
      row["value"] = real(r.value);
      row["limit"] = real(r.limit);
      row["pass"] = r.pass;
      if (!r.note.empty()) row["note"] = r.note;
      list.push_back(std::move(row));
    }
    j["invariants"] = std::move(list);
    j["ok"] = ok;
    emit(s, j);
  } else {
    s.out << title << "\n";
    for (const auto& r : rows) {
      s.out << (r.pass ? "PASS  " : "FAIL  ") << r.name << "  value=" << brief(r.value) << "  limit=" << brief(r.limit);
      if (!r.note.empty()) s.out << "  (" << r.note << ")";
      s.out << "\n";
    }
    s.out << (ok ? "all invariants hold" : "some invariants fail") << "\n";
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

Json entry_to_json(const arith::TowerEntry& e) {
  Json j = Json::object();
  j["d"] = e.d;
  j["m"] = e.m;
  j["d0"] = e.d0;
  j["rung"] = e.rung;
  j["ladder_base"] = e.ladder_base;
  return j;
}

Json sic_report_json(const sic::SicReport& r) {
  Json j = Json::object();
  j["d"] = r.d;
  j["is_sic"] = r.is_sic;
  j["max_modulus_deviation"] = real(r.max_modulus_deviation);
  j["frame_potential"] = real(r.frame_potential);
  j["welch_bound"] = real(sic::welch_bound(r.d));
  j["tight_frame_residual"] = real(r.tight_frame_residual);
  j["tol"] = real(r.tol);
  return j;
}

void print_sic_report(const Streams& s, const sic::SicReport& r) {
  s.out << "d = " << r.d << ": " << (r.is_sic ? "SIC" : "not a SIC") << "\n"
        << "  max | |<psi|D_p psi>|^2 - 1/(d+1) | = " << brief(r.max_modulus_deviation) << " (tol " << brief(r.tol)
        << ")\n"
        << "  frame potential = " << brief(r.frame_potential) << " (minimum " << brief(sic::welch_bound(r.d)) << ")\n"
        << "  tight frame residual = " << brief(r.tight_frame_residual) << "\n";
}

Json etf_report_json(const etf::EtfReport& r) {
  Json j = Json::object();
  j["ambient_dim"] = r.ambient_dim;
  j["count"] = r.count;
  j["is_etf"] = r.is_etf;
  j["c1"] = real(r.c1);
  j["c2"] = real(r.c2);
  j["observed_c2"] = real(r.observed_c2);
  j["norm_residual"] = real(r.norm_residual);
  j["tight_residual"] = real(r.tight_residual);
  j["equiangular_spread"] = real(r.equiangular_spread);
  j["c2_residual"] = real(r.c2_residual);
  return j;
}

void print_etf_report(const Streams& s, const etf::EtfReport& r) {
  s.out << r.count << " vectors in dimension " << r.ambient_dim << ": " << (r.is_etf ? "ETF" : "not an ETF") << "\n"
        << "  c1 = " << brief(r.c1) << ", c2 = " << brief(r.c2) << ", observed |overlap|^2 = " << brief(r.observed_c2)
        << "\n"
        << "  tight residual = " << brief(r.tight_residual) << ", equiangular spread = " << brief(r.equiangular_spread)
        << ", c2 residual = " << brief(r.c2_residual) << "\n";
}

Json search_options_json(int d, const sic::SearchOptions& o, bool parity) {
  Json j = Json::object();
  j["d"] = d;
  j["seed"] = o.seed;
  j["restarts"] = o.restarts;
  j["max_iters"] = o.max_iters;
  j["tol"] = real(o.tol);
  j["zauner"] = o.use_zauner_subspace ? Json(*o.use_zauner_subspace) : Json("default");
  j["parity_symmetric"] = parity;
  return j;
}

// ---------------------------------------------------------------------------

int run_tower(const Streams& s, arith::Int d0, arith::Int bound, bool json, bool csv) {
  const auto tower = arith::tower_enumerate(d0, bound);
  if (json) {
    Json j = Json::object();
    j["d0"] = d0;
    j["bound"] = bound;
    Json dims = Json::array(), entries = Json::array();
    for (const auto& e : tower) {
      dims.push_back(e.d);
      entries.push_back(entry_to_json(e));
    }
    j["dimensions"] = std::move(dims);
    j["entries"] = std::move(entries);
    emit(s, j);
  } else if (csv) {
    s.out << "d,m,d0,rung,ladder_base\n";
    for (const auto& e : tower) s.out << e.d << ',' << e.m << ',' << e.d0 << ',' << e.rung << ',' << e.ladder_base << "\n";
  } else {
    for (std::size_t k = 0; k < tower.size(); ++k) s.out << (k ? " " : "") << tower[k].d;
    s.out << "\n";
    for (const auto& e : tower)
      s.out << "  d=" << e.d << "  (d+1)(d-3) = " << e.m << "^2 * " << e.d0 << "  rung=" << e.rung
            << "  ladder_base=" << e.ladder_base << "\n";
  }
  return kExitOk;
}

int run_ladder(const Streams& s, arith::Int d, unsigned steps, bool json) {
  const auto chain = arith::ladder(d, steps);
  Json entries = Json::array();
  for (auto x : chain) {
    Json e = Json::object();
    e["d"] = x;
    if (x > 3) {
      const auto split = arith::squarefree_decompose(arith::tower_discriminant(x));
      e["m"] = split.m;
      e["d0"] = split.d0;
    } else {
      e["m"] = 0;
      e["d0"] = nullptr;
    }
    entries.push_back(std::move(e));
  }
  if (json) {
    Json j = Json::object();
    j["d"] = d;
    j["steps"] = steps;
    j["ladder"] = chain;
    j["entries"] = std::move(entries);
    emit(s, j);
  } else {
    for (std::size_t k = 0; k < chain.size(); ++k) s.out << (k ? " -> " : "") << chain[k];
    s.out << "\n";
    for (const auto& e : entries) {
      s.out << "  d=" << e["d"].get<arith::Int>();
      if (e["d0"].is_null()) s.out << "  (d+1)(d-3) = 0\n";
      else s.out << "  d0=" << e["d0"].get<arith::Int>() << "\n";
    }
  }
  return kExitOk;
}

int run_graph(const Streams& s, const std::vector<arith::Int>& dims, bool reduce, bool dot, bool json) {
  const auto edges = arith::divisibility_graph(dims, reduce);
  if (json) {
    Json j = Json::object();
    j["dims"] = dims;
    j["reduced"] = reduce;
    Json list = Json::array();
    for (const auto& e : edges) list.push_back(Json::array({e.from, e.to}));
    j["edges"] = std::move(list);
    emit(s, j);
  } else if (dot) {
    s.out << arith::to_dot(dims, edges);
  } else {
    for (const auto& e : edges) s.out << e.from << " -> " << e.to << "\n";
    if (edges.empty()) s.out << "no divisibility relations\n";
  }
  return kExitOk;
}

int run_wh_check(const Streams& s, int d, bool exhaustive, bool json) {
  require_odd_dimension(d);
  std::vector<Row> rows;
  const auto law = wh::group_law_check<double>(d, exhaustive ? -1 : kDefaultMaxPairs);
  const std::string pairs = std::to_string(law.pairs_checked) + (law.exhaustive ? " pairs, exhaustive" : " sampled pairs");
  rows.push_back(residual_row("group_law", law.group_law_residual, 1e-11));
  rows.back().note = pairs;
  rows.push_back(residual_row("trace_orthogonality", law.trace_residual, 1e-11));
  rows.back().note = pairs;
  rows.push_back(residual_row("unitarity", law.unitarity_residual, 1e-11));

  const CMatrix<double> up = wh::parity<double>(d);
  double parity_residual = 0, hermitian = 0, unitary = 0, trace = 0;
  int bad_spectra = 0;
  for (const auto& p : wh::all_indices(d)) {
    const CMatrix<double> dp = wh::displacement<double>(p);
    parity_residual = std::max(parity_residual, max_abs(CMatrix<double>(up * dp * up.adjoint()) - wh::displacement<double>(-p)));
    const auto a = wh::phase_point<double>(p);
    hermitian = std::max(hermitian, max_abs(CMatrix<double>(a.matrix - a.matrix.adjoint())));
    unitary = std::max(unitary, max_abs(CMatrix<double>(a.matrix * a.matrix.adjoint() - CMatrix<double>::Identity(d, d))));
    trace = std::max(trace, std::abs(a.matrix.trace() - Complex<double>(1)));
    const auto m = wh::involution_spectrum(a.matrix);
    if (m.plus != (d + 1) / 2 || m.minus != (d - 1) / 2 || m.other != 0) ++bad_spectra;
  }
  rows.push_back(residual_row("parity_conjugation", parity_residual, 1e-11));
  rows.push_back(residual_row("phase_point_hermitian", hermitian, 1e-11));
  rows.push_back(residual_row("phase_point_unitary", unitary, 1e-11));
  rows.push_back(residual_row("phase_point_trace", trace, 1e-11));
  rows.push_back({"phase_point_multiplicities", double(bad_spectra), 1, bad_spectra == 0,
                  "operators without spectrum (+1)^" + std::to_string((d + 1) / 2) + " (-1)^" +
                      std::to_string((d - 1) / 2)});
  if (d <= kGrassmannMaxDim) {
    const auto g = wh::grassmann_equidistance_check<double>(d);
    rows.push_back(residual_row("grassmann_equidistance",
                                std::max(g.max_deviation, std::abs(g.distance2 - d / 2.0)), 1e-10));
    rows.back().note = "distance^2 = " + real(g.distance2);
  } else {
    rows.push_back({"grassmann_equidistance", 0, 1e-10, true, "skipped for d > " + std::to_string(kGrassmannMaxDim)});
  }
  Json header = Json::object();
  header["d"] = d;
  return report_rows(s, "Weyl-Heisenberg invariants, d = " + std::to_string(d), header, rows, json);
}

int run_wh_grassmann(const Streams& s, int d, double tol, bool json) {
  const auto g = wh::grassmann_equidistance_check<double>(d, tol);
  const double expected = d / 2.0;
  const bool ok = g.equidistant && std::abs(g.distance2 - expected) < tol;
  if (json) {
    Json j = Json::object();
    j["d"] = d;
    j["points"] = long(d) * d;
    j["equidistant"] = ok;
    j["distance2"] = real(g.distance2);
    j["expected_distance2"] = real(expected);
    j["max_deviation"] = real(g.max_deviation);
    j["tol"] = real(tol);
    emit(s, j);
  } else {
    s.out << d * d << " projectors (1 + A_p)/2 of rank " << (d + 1) / 2 << " in dimension " << d << "\n"
          << "  squared chordal distance = " << brief(g.distance2) << " (expected " << brief(expected) << ")\n"
          << "  max deviation = " << brief(g.max_deviation) << "\n"
          << (ok ? "equidistant" : "not equidistant") << "\n";
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

int run_clifford_check(const Streams& s, int d, int samples, std::uint64_t seed, bool json) {
  const auto r = clifford::clifford_check<double>(d, samples, seed);
  std::vector<Row> rows;
  rows.push_back(residual_row("defining_relation", r.defining_relation_residual, 1e-9));
  rows.back().note = std::to_string(samples) + " random F, all p";
  rows.push_back(residual_row("unitarity", r.unitarity_residual, 1e-9));
  rows.push_back(residual_row("projective_homomorphism", r.homomorphism_residual, 1e-9));
  rows.push_back(residual_row("cyclotomic_phases", r.cyclotomic_residual, 1e-9));
  rows.push_back(residual_row("parity_representative", r.parity_residual, 1e-12));
  if (d == 3 || d == 5) {
    const auto f = clifford::factor_group_order_check(d);
    rows.push_back({"factor_group_order", double(f.quotient_order), double(f.expected_quotient_order), f.ok,
                    d == 3 ? "SL(2,3)/{+-1} of order 12" : "SL(2,5)/{+-1} of order 60"});
  }
  Json header = Json::object();
  header["d"] = d;
  header["samples"] = samples;
  header["seed"] = seed;
  return report_rows(s, "Clifford representatives, d = " + std::to_string(d), header, rows, json);
}

int run_clifford_zauner(const Streams& s, int d, const std::string& emit_path, bool json) {
  const auto u = clifford::zauner<double>(d);
  const CMatrix<double> cube = u.matrix * u.matrix * u.matrix;
  const double cube_residual = max_abs(CMatrix<double>(cube - CMatrix<double>::Identity(d, d)));
  const double relation = clifford::defining_relation_residual(u, wh::all_indices(d));
  const auto spaces = clifford::order3_eigenspaces(u.matrix);
  if (!emit_path.empty()) io::write_text_file_atomic(emit_path, io::dump(io::clifford_to_json(u)));
  if (json) {
    Json j = Json::object();
    j["d"] = d;
    j["F"] = Json::array({Json::array({u.F.alpha, u.F.beta}), Json::array({u.F.gamma, u.F.delta})});
    j["cube_residual"] = real(cube_residual);
    j["defining_relation_residual"] = real(relation);
    Json dims = Json::array();
    for (const auto& e : spaces) dims.push_back(e.basis.cols());
    j["eigenspace_dims"] = std::move(dims);
    j["emitted"] = emit_path.empty() ? Json(nullptr) : Json(emit_path);
    emit(s, j);
  } else {
    s.out << "Zauner unitary for F = [[0,-1],[1,-1]] mod " << d << "\n"
          << "  |U^3 - 1| = " << brief(cube_residual) << "\n"
          << "  defining relation residual = " << brief(relation) << "\n"
          << "  eigenspace dimensions (1, w, w^2) = " << spaces[0].basis.cols() << ", " << spaces[1].basis.cols()
          << ", " << spaces[2].basis.cols() << "\n";
    if (!emit_path.empty()) s.out << "  written to " << emit_path << "\n";
  }
  return cube_residual < 1e-9 && relation < 1e-9 ? kExitOk : kExitVerificationFailed;
}

struct SearchArgs {
  int d = 0;
  sic::SearchOptions options;
  bool no_zauner = false;
  bool parity = false;
  std::string out;
  bool catalog_put = false;
  bool json = false;
};

int run_sic_search(const Streams& s, SearchArgs a, const std::string& catalog_root) {
  if (a.no_zauner) a.options.use_zauner_subspace = false;
  sic::SearchOutcome outcome;
  int dim = a.d;
  if (a.parity) {
    // --d names the lower dimension; the search runs in d(d-2)
    dim = a.d * (a.d - 2);
    if (a.d < 3 || a.d % 2 == 0 || dim > 200) throw std::invalid_argument("--parity: d must be odd with 3 <= d(d-2) <= 200");
    outcome = etf::search_parity_symmetric(a.d, a.options);
  } else {
    outcome = sic::search_fiducial(a.d, a.options);
  }
  Json j = Json::object();
  j["d"] = dim;
  j["found"] = outcome.found();
  j["restarts_tried"] = outcome.restarts_tried;
  j["best_potential"] = real(outcome.best_potential);
  j["options"] = search_options_json(a.d, a.options, a.parity);
  if (!outcome.found()) {
    if (a.json) emit(s, j);
    else
      s.out << "no fiducial found in dimension " << dim << " after " << outcome.restarts_tried
            << " restarts (best potential " << brief(outcome.best_potential) << ")\n";
    return kExitVerificationFailed;
  }
  const auto& fid = *outcome.fiducial;
  const auto report = sic::verify_sic(fid, a.options.tol);
  io::save_fiducial(a.out, {fid, Json::object()});
  j["metadata"] = io::metadata_to_json(fid.metadata);
  j["verification"] = sic_report_json(report);
  j["out"] = a.out;
  if (a.catalog_put) {
    catalog::Catalog cat(catalog_root);
    const auto entry = cat.put(fid, a.options.tol, search_options_json(a.d, a.options, a.parity));
    j["catalog_file"] = entry.file.string();
  }
  if (a.json) {
    emit(s, j);
  } else {
    s.out << "found a fiducial in dimension " << dim << " (restart " << fid.metadata.restart << ", subspace "
          << fid.metadata.subspace << ", " << fid.metadata.iterations << " iterations)\n";
    print_sic_report(s, report);
    s.out << "written to " << a.out << "\n";
    if (j.contains("catalog_file")) s.out << "stored as " << j["catalog_file"].get<std::string>() << "\n";
  }
  return report.is_sic ? kExitOk : kExitVerificationFailed;
}

int run_sic_verify(const Streams& s, const std::string& in, double tol, bool zauner, bool json) {
  const auto doc = io::load_fiducial(in);
  const auto report = sic::verify_sic(doc.fiducial, tol);
  std::optional<sic::SymmetryCheck<double>> sym;
  if (zauner) sym = sic::check_projective_symmetry(doc.fiducial, clifford::zauner<double>(doc.fiducial.d).matrix);
  if (json) {
    Json j = sic_report_json(report);
    if (sym) {
      Json z = Json::object();
      z["symmetric"] = sym->symmetric;
      z["phase"] = io::complex_to_json(sym->phase);
      z["residual"] = real(sym->residual);
      j["zauner"] = std::move(z);
    }
    emit(s, j);
  } else {
    print_sic_report(s, report);
    if (sym)
      s.out << "  Zauner symmetry: " << (sym->symmetric ? "yes" : "no") << " (residual " << brief(sym->residual)
            << ")\n";
  }
  return report.is_sic && (!sym || sym->symmetric) ? kExitOk : kExitVerificationFailed;
}

int run_etf_lift(const Streams& s, const std::string& in, const std::string& out, double tol, bool json) {
  const auto doc = io::load_fiducial(in);
  const auto lift = etf::sym_lift(doc.fiducial);
  const auto report = etf::verify_etf(lift.family, tol);
  Json meta = Json::object();
  meta["construction"] = "symmetric_lift";
  meta["d"] = doc.fiducial.d;
  meta["basis"] = "|kk> for k < d, then (|ij> + |ji>)/sqrt(2) for i < j lexicographic";
  meta["input_is_sic"] = lift.input_is_sic;
  io::save_family(out, {lift.family, meta});
  if (json) {
    Json j = etf_report_json(report);
    j["input_is_sic"] = lift.input_is_sic;
    j["out"] = out;
    emit(s, j);
  } else {
    if (!lift.input_is_sic) s.err << "warning: input does not verify as a SIC; the overlap pattern is unspecified\n";
    print_etf_report(s, report);
    s.out << "written to " << out << "\n";
  }
  return lift.input_is_sic && report.is_etf ? kExitOk : kExitVerificationFailed;
}

int run_etf_naimark(const Streams& s, const std::string& in, const std::string& out, double tol, bool json) {
  const auto doc = io::load_family(in);
  const auto complement = etf::naimark_complement(doc.family);
  const auto report = etf::verify_etf(complement, tol);
  Json meta = Json::object();
  meta["construction"] = "naimark_complement";
  meta["source_ambient_dim"] = doc.family.ambient_dim;
  if (doc.metadata.contains("d")) meta["d"] = doc.metadata["d"];
  io::save_family(out, {complement, meta});
  if (json) {
    Json j = etf_report_json(report);
    j["out"] = out;
    emit(s, j);
  } else {
    print_etf_report(s, report);
    s.out << "written to " << out << "\n";
  }
  return report.is_etf ? kExitOk : kExitVerificationFailed;
}

int run_etf_verify(const Streams& s, const std::string& in, double tol, bool json) {
  const auto doc = io::load_family(in);
  const auto report = etf::verify_etf(doc.family, tol);
  if (json) emit(s, etf_report_json(report));
  else print_etf_report(s, report);
  return report.is_etf ? kExitOk : kExitVerificationFailed;
}

int run_etf_align(const Streams& s, const std::string& low_path, const std::string& high_path, bool full_mal,
                  bool scan, double threshold, bool json) {
  auto low = io::load_fiducial(low_path).fiducial;
  const auto high = io::load_fiducial(high_path).fiducial;
  if (high.d != low.d * (low.d - 2))
    throw std::invalid_argument("--high: dimension " + std::to_string(high.d) + " is not d(d-2) for d = " +
                                std::to_string(low.d));
  std::optional<etf::OrbitAlignment<double>> orbit;
  if (scan) {
    orbit = etf::best_alignment(low, high);
    low = orbit->low;
  }
  const auto r = etf::alignment_check(low, high, full_mal);
  const bool ok = r.kvadfas_residual < threshold;
  if (json) {
    Json j = Json::object();
    j["d"] = r.d;
    j["D"] = r.D;
    j["crt_order"] = "(d-2)-major: e_k -> e_{k mod (d-2)} (x) e_{k mod d}";
    j["parity_symmetric"] = r.parity_symmetric;
    j["parity_residual"] = real(r.parity_residual);
    j["kvadfas_residual"] = real(r.kvadfas_residual);
    j["phase_match_residual"] = real(r.phase_match_residual);
    j["full_sic_residual"] = r.full_sic_residual ? Json(real(*r.full_sic_residual)) : Json(nullptr);
    j["high_is_sic"] = r.high_is_sic;
    j["threshold"] = real(threshold);
    j["aligned"] = ok;
    if (orbit) {
      Json o = Json::object();
      o["F"] = Json::array({Json::array({orbit->F.alpha, orbit->F.beta}), Json::array({orbit->F.gamma, orbit->F.delta})});
      o["q"] = Json::array({orbit->q.i, orbit->q.j});
      o["conjugated"] = orbit->conjugated;
      j["orbit_scan"] = std::move(o);
    }
    emit(s, j);
  } else {
    s.out << "alignment of d = " << r.d << " with D = " << r.D << " (C^" << r.d - 2 << " (x) C^" << r.d
          << ", (d-2)-major CRT order)\n";
    if (orbit)
      s.out << "  orbit scan: F = [[" << orbit->F.alpha << "," << orbit->F.beta << "],[" << orbit->F.gamma << ","
            << orbit->F.delta << "]], q = (" << orbit->q.i << "," << orbit->q.j << ")"
            << (orbit->conjugated ? ", complex conjugated" : "") << "\n";
    s.out << "  parity symmetric: " << (r.parity_symmetric ? "yes" : "no") << " (residual " << brief(r.parity_residual)
          << ")\n"
          << "  restricted overlap residual = " << brief(r.kvadfas_residual) << " (threshold " << brief(threshold) << ")\n"
          << "  phase match residual = " << brief(r.phase_match_residual) << "\n";
    if (r.full_sic_residual) s.out << "  full product-displacement residual = " << brief(*r.full_sic_residual) << "\n";
    s.out << (ok ? "aligned" : "not aligned") << "\n";
  }
  return ok ? kExitOk : kExitVerificationFailed;
}

Json catalog_entry_json(const catalog::CatalogEntry& e) {
  Json j = Json::object();
  j["d"] = e.d;
  j["file_hash"] = e.file_hash;
  j["created"] = e.created;
  Json v = Json::object();
  v["is_sic"] = e.verification.is_sic;
  v["max_modulus_deviation"] = real(e.verification.max_modulus_deviation);
  v["frame_potential"] = real(e.verification.frame_potential);
  v["tight_frame_residual"] = real(e.verification.tight_frame_residual);
  v["tol"] = real(e.verification.tol);
  j["verification"] = std::move(v);
  j["seed_provenance"] = e.seed_provenance;
  j["file"] = e.file.string();
  return j;
}

int run_catalog_put(const Streams& s, const std::string& root, const std::string& in, double tol, bool json) {
  const auto doc = io::load_fiducial(in);
  const auto report = sic::verify_sic(doc.fiducial, tol);
  if (!report.is_sic) {
    if (json) emit(s, sic_report_json(report));
    else s.out << in << " does not verify as a SIC; not stored\n";
    return kExitVerificationFailed;
  }
  Json provenance = Json::object();
  provenance["source"] = in;
  provenance["metadata"] = io::metadata_to_json(doc.fiducial.metadata);
  const auto entry = catalog::Catalog(root).put(doc.fiducial, tol, provenance);
  if (json) emit(s, catalog_entry_json(entry));
  else s.out << "stored d = " << entry.d << " as " << entry.file.string() << "\n";
  return kExitOk;
}

int run_catalog_list(const Streams& s, const std::string& root, bool json) {
  const auto listing = catalog::Catalog(root).list();
  Json entries = Json::array();
  for (const auto& l : listing) {
    if (l.corrupt) s.err << "warning: " << l.entry.file.string() << " is corrupt (" << l.problem << ")\n";
    if (json) {
      Json j = l.corrupt ? Json::object() : catalog_entry_json(l.entry);
      if (l.corrupt) {
        j["d"] = l.entry.d;
        j["file"] = l.entry.file.string();
      }
      j["status"] = l.corrupt ? "corrupt" : "ok";
      if (l.corrupt) j["problem"] = l.problem;
      entries.push_back(std::move(j));
    } else if (l.corrupt) {
      s.out << "d=" << l.entry.d << "  CORRUPT  " << l.entry.file.string() << "  (" << l.problem << ")\n";
    } else {
      s.out << "d=" << l.entry.d << "  " << l.entry.created << "  residual=" << brief(l.entry.verification.max_modulus_deviation)
            << "  " << l.entry.file.string() << "\n";
    }
  }
  if (json) {
    Json j = Json::object();
    j["root"] = root;
    j["entries"] = std::move(entries);
    emit(s, j);
  } else if (listing.empty()) {
    s.out << "catalog " << root << " is empty\n";
  }
  return kExitOk;
}

int run_catalog_get(const Streams& s, const std::string& root, int d, const std::string& out, bool json) {
  const catalog::Catalog cat(root);
  const auto entry = cat.get(d);
  if (!entry) throw std::invalid_argument("--d: no catalog entry for d = " + std::to_string(d) + " in " + root);
  const auto doc = cat.load(*entry);
  if (!out.empty()) io::save_fiducial(out, {doc.fiducial, Json::object()});
  if (json) {
    Json j = catalog_entry_json(*entry);
    j["fiducial"] = io::fiducial_to_json({doc.fiducial, Json::object()});
    emit(s, j);
  } else {
    s.out << "d=" << entry->d << "  " << entry->created << "  residual="
          << brief(entry->verification.max_modulus_deviation) << "  " << entry->file.string() << "\n";
    if (!out.empty()) s.out << "written to " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Streams s{out, err};
  CLI::App app{"SIC fiducials, dimension towers and equiangular tight frames", "sicladder"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or INI file with option defaults; command-line flags win");
  std::function<int()> action;

  // shared option storage
  arith::Int d0 = 0, bound = 0, ladder_d = 0;
  unsigned steps = 1;
  std::vector<arith::Int> dims;
  int d = 0, samples = 50;
  std::uint64_t seed = 1;
  double threshold = 1e-6;
  bool json = false, csv = false, dot = false, reduce = false, exhaustive = false, zauner = false;
  bool full_mal = false, scan = false;
  std::string in, out_path, low, high, emit_path;
  std::string catalog_root = catalog::default_root().string();
  SearchArgs search;

  auto add_json = [&](CLI::App* c) { c->add_flag("--json", json, "Machine-readable output"); };
  auto add_d = [&](CLI::App* c) { c->add_option("--d", d, "Odd dimension >= 3")->required(); };
  std::deque<double> tols;  // one default per subcommand
  auto add_tol = [&](CLI::App* c, double def) -> double* {
    double* t = &tols.emplace_back(def);
    c->add_option("--tol", *t, "Tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    return t;
  };
  auto add_catalog = [&](CLI::App* c) {
    c->add_option("--catalog", catalog_root, std::string("Catalog directory (default $") + catalog::kPathVariable +
                                                 " or " + catalog::kDefaultPath + ")");
  };

  auto* tower = app.add_subcommand("tower", "Dimensions d whose (d+1)(d-3) has square-free part d0");
  tower->add_option("--d0", d0, "Square-free discriminant")->required();
  tower->add_option("--bound", bound, "Largest d")->required();
  auto* tower_json = tower->add_flag("--json", json, "Machine-readable output");
  tower->add_flag("--csv", csv, "CSV output")->excludes(tower_json);
  tower->callback([&] { action = [&] { return run_tower(s, d0, bound, json, csv); }; });

  auto* ladder = app.add_subcommand("ladder", "Successive lifts d -> d(d-2)");
  ladder->add_option("--d", ladder_d, "Starting dimension")->required();
  ladder->add_option("--steps", steps, "Number of lifts")->required();
  add_json(ladder);
  ladder->callback([&] { action = [&] { return run_ladder(s, ladder_d, steps, json); }; });

  auto* graph = app.add_subcommand("graph", "Divisibility order between dimensions");
  graph->add_option("--dims", dims, "Comma-separated odd dimensions")->required()->delimiter(',');
  graph->add_flag("--reduce", reduce, "Keep covering relations only");
  auto* graph_dot = graph->add_flag("--dot", dot, "Graphviz output");
  graph->add_flag("--json", json, "Machine-readable output")->excludes(graph_dot);
  graph->callback([&] { action = [&] { return run_graph(s, dims, reduce, dot, json); }; });

  auto* wh = app.add_subcommand("wh", "Weyl-Heisenberg group");
  wh->require_subcommand(1);
  auto* wh_check = wh->add_subcommand("check", "Group law, parity and phase point invariants");
  add_d(wh_check);
  wh_check->add_flag("--exhaustive", exhaustive, "Check all pairs even for large d");
  add_json(wh_check);
  wh_check->callback([&] { action = [&] { return run_wh_check(s, d, exhaustive, json); }; });
  auto* wh_grassmann = wh->add_subcommand("grassmann", "Equidistance of the phase point projectors");
  add_d(wh_grassmann);
  double* wh_grassmann_tol = add_tol(wh_grassmann, 1e-10);
  add_json(wh_grassmann);
  wh_grassmann->callback([&, wh_grassmann_tol] { action = [&, wh_grassmann_tol] { return run_wh_grassmann(s, d, *wh_grassmann_tol, json); }; });

  auto* clifford = app.add_subcommand("clifford", "Clifford unitaries for SL(2, Z_d)");
  clifford->require_subcommand(1);
  auto* cl_check = clifford->add_subcommand("check", "Defining relation on random symplectic matrices");
  add_d(cl_check);
  cl_check->add_option("--samples", samples, "Random symplectic matrices")->check(CLI::PositiveNumber)->capture_default_str();
  cl_check->add_option("--seed", seed, "Sampling seed")->capture_default_str();
  add_json(cl_check);
  cl_check->callback([&] { action = [&] { return run_clifford_check(s, d, samples, seed, json); }; });
  auto* cl_zauner = clifford->add_subcommand("zauner", "The order-3 Zauner unitary");
  add_d(cl_zauner);
  cl_zauner->add_option("--emit", emit_path, "Write the matrix as JSON");
  add_json(cl_zauner);
  cl_zauner->callback([&] { action = [&] { return run_clifford_zauner(s, d, emit_path, json); }; });

  auto* sic_cmd = app.add_subcommand("sic", "SIC fiducials");
  sic_cmd->require_subcommand(1);
  auto* sic_search = sic_cmd->add_subcommand("search", "Numerical fiducial search");
  sic_search->add_option("--d", search.d, "Odd dimension, 3 <= d <= 200")->required();
  sic_search->add_option("--seed", search.options.seed, "Search seed")->required();
  sic_search->add_option("--restarts", search.options.restarts, "Restart budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sic_search->add_option("--max-iters", search.options.max_iters, "Descent iterations per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sic_search->add_option("--tol", search.options.tol, "Verification tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sic_search->add_option("--threads", search.options.threads, "Concurrent restarts (0: hardware)");
  sic_search->add_flag("--no-zauner", search.no_zauner, "Search the full space");
  sic_search->add_flag("--parity", search.parity,
                       "Search dimension d(d-2) for a SIC fixed by U_P (x) 1 (with --d naming d)");
  sic_search->add_option("--out", search.out, "Fiducial JSON file")->required();
  sic_search->add_flag("--catalog-put", search.catalog_put, "Also store the result in the catalog");
  add_catalog(sic_search);
  sic_search->add_flag("--json", search.json, "Machine-readable output");
  sic_search->callback([&] { action = [&] { return run_sic_search(s, search, catalog_root); }; });
  auto* sic_verify = sic_cmd->add_subcommand("verify", "Verify a fiducial file");
  sic_verify->add_option("--in", in, "Fiducial JSON file")->required();
  double* sic_verify_tol = add_tol(sic_verify, 1e-10);
  sic_verify->add_flag("--zauner", zauner, "Also require the Zauner symmetry");
  add_json(sic_verify);
  sic_verify->callback([&, sic_verify_tol] { action = [&, sic_verify_tol] { return run_sic_verify(s, in, *sic_verify_tol, zauner, json); }; });

  auto* etf_cmd = app.add_subcommand("etf", "Equiangular tight frames");
  etf_cmd->require_subcommand(1);
  auto* etf_lift = etf_cmd->add_subcommand("lift", "Symmetric-subspace lift of a SIC");
  etf_lift->add_option("--in", in, "Fiducial JSON file")->required();
  etf_lift->add_option("--out", out_path, "Family JSON file")->required();
  double* etf_lift_tol = add_tol(etf_lift, 1e-9);
  add_json(etf_lift);
  etf_lift->callback([&, etf_lift_tol] { action = [&, etf_lift_tol] { return run_etf_lift(s, in, out_path, *etf_lift_tol, json); }; });
  auto* etf_naimark = etf_cmd->add_subcommand("naimark", "Naimark complement of a tight frame");
  etf_naimark->add_option("--in", in, "Family JSON file")->required();
  etf_naimark->add_option("--out", out_path, "Family JSON file")->required();
  double* etf_naimark_tol = add_tol(etf_naimark, 1e-9);
  add_json(etf_naimark);
  etf_naimark->callback([&, etf_naimark_tol] { action = [&, etf_naimark_tol] { return run_etf_naimark(s, in, out_path, *etf_naimark_tol, json); }; });
  auto* etf_verify = etf_cmd->add_subcommand("verify", "Verify a family file");
  etf_verify->add_option("--in", in, "Family JSON file")->required();
  double* etf_verify_tol = add_tol(etf_verify, 1e-9);
  add_json(etf_verify);
  etf_verify->callback([&, etf_verify_tol] { action = [&, etf_verify_tol] { return run_etf_verify(s, in, *etf_verify_tol, json); }; });
  auto* etf_align = etf_cmd->add_subcommand("align", "Alignment of SICs in dimensions d and d(d-2)");
  etf_align->add_option("--low", low, "Fiducial in dimension d")->required();
  etf_align->add_option("--high", high, "Fiducial in dimension d(d-2)")->required();
  etf_align->add_flag("--full-mal", full_mal, "Check all product displacements too");
  etf_align->add_flag("--scan-orbit", scan, "Replace --low by its best-aligned Clifford orbit member");
  etf_align->add_option("--threshold", threshold, "Largest accepted residual")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_json(etf_align);
  etf_align->callback([&] { action = [&] { return run_etf_align(s, low, high, full_mal, scan, threshold, json); }; });

  auto* cat = app.add_subcommand("catalog", "Fiducial catalog");
  cat->require_subcommand(1);
  add_catalog(cat);
  auto* cat_put = cat->add_subcommand("put", "Verify and store a fiducial");
  cat_put->add_option("--in", in, "Fiducial JSON file")->required();
  double* cat_put_tol = add_tol(cat_put, 1e-10);
  add_json(cat_put);
  cat_put->callback([&, cat_put_tol] { action = [&, cat_put_tol] { return run_catalog_put(s, catalog_root, in, *cat_put_tol, json); }; });
  auto* cat_list = cat->add_subcommand("list", "List entries by (d, created)");
  add_json(cat_list);
  cat_list->callback([&] { action = [&] { return run_catalog_list(s, catalog_root, json); }; });
  auto* cat_get = cat->add_subcommand("get", "Best-residual entry for d");
  add_d(cat_get);
  cat_get->add_option("--out", out_path, "Write the fiducial here");
  add_json(cat_get);
  for (auto* c : {cat_put, cat_list, cat_get}) c->fallthrough();
  cat_get->callback([&] { action = [&] { return run_catalog_get(s, catalog_root, d, out_path, json); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (!action) {
    err << "error: no command given\n";
    return kExitUsage;
  }
  try {
    return action();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitUsage;
}

}  // namespace sicladder::cli
