#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <locale>
#include <memory>
#include <numbers>
#include <sstream>

#include "crossk/denjoy.hpp"
#include "crossk/ktheory.hpp"
#include "crossk/shiftspec.hpp"
#include "crossk/symdyn.hpp"

namespace crossk::cli {

namespace fb = crossk::freeboundary;
using Json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string output;
  std::uint64_t seed = 0;
  bool serial = false;

  // sequence source
  std::size_t gen = 0;
  std::string file;

  std::size_t n = 0;
  std::size_t max_k = 10;
  std::size_t radius = 16;

  std::string letter;
  std::string word;
  std::size_t level = 1;
  std::string vector_file;
  std::string kind = "infiniteness";
  std::string target_first = "a";
  long exponent = 1;
  std::string s1, s2;

  std::string lambda = "golden";
  double base = 0.0;
  std::size_t depth = 3;
  std::string x, y;
  double start = 0.0;
  std::size_t length = 0;
  std::string coeffs;

  std::string model = "denjoy-alpha";
  std::size_t samples = 50;
  bool corrupt = false;
  std::string family = "example16";
  std::size_t from = 1, to = 5;
  long predict_rank = -1;

  std::size_t window = 128;
  std::string gamma = "0,1";
  double lo = 0.5, hi = 2.5;
  std::size_t steps = 41;
  std::string n_values = "50,200,800";
  std::size_t count = 20;
  std::size_t points = 8;
  std::string weights = "1,2";
  std::size_t repeats = 8;
  std::string theta = "golden";
};

Json integer_json(const zlattice::Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

Json invariants_json(const zlattice::AbGroupInvariants& g) {
  Json torsion = Json::array();
  for (const auto& t : g.torsion) torsion.push_back(integer_json(t));
  return Json{{"free_rank", g.free_rank}, {"torsion", torsion}};
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : split(s)) {
    std::istringstream in(item);
    in.imbue(std::locale::classic());
    T v{};
    if (!(in >> v) || !in.eof()) throw PreconditionError(std::string("cannot parse ") + what + " '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw PreconditionError(std::string("empty ") + what + " list");
  return out;
}

symdyn::BiSequence load_sequence(const RunConfig& c) {
  if (!c.file.empty()) return symdyn::read_sequence_file(c.file);
  if (c.gen < 3) throw PreconditionError("give --file, or --gen >= 3 (two-sided stage gen/3)");
  return symdyn::two_sided_fibonacci(c.gen / 3);
}

Json source_json(const RunConfig& c, const symdyn::BiSequence& x) {
  Json j;
  if (!c.file.empty())
    j["file"] = c.file;
  else
    j["gen"] = c.gen;
  j["half_width"] = x.half_width();
  return j;
}

ktheory::DiagonalActionModel make_model(const std::string& name, std::size_t depth, std::size_t level) {
  using M = ktheory::DiagonalActionModel;
  if (name == "point") return M::point(level);
  if (name == "denjoy-alpha") return M::denjoy_alpha(depth, level);
  if (name == "denjoy-both") return M::denjoy_both(depth, level);
  if (name == "identity") return M::identity(depth, level);
  if (name == "swap") return M::swap(level);
  throw PreconditionError("unknown model '" + name + "'");
}

Json model_json(const ktheory::DiagonalActionModel& m) {
  return Json{{"name", m.name()}, {"depth", m.depth()}, {"level", m.level()}, {"k", m.k()}};
}

Json k_report(const ktheory::DiagonalActionModel& m, const zlattice::AbGroupInvariants& g, Json checks,
              std::uint64_t seed) {
  Json j{{"model", model_json(m)}, {"level", m.level()}};
  const Json inv = invariants_json(g);
  j["free_rank"] = inv["free_rank"];
  j["torsion"] = inv["torsion"];
  j["checks"] = std::move(checks);
  j["seed"] = seed;
  return j;
}

Json check(const std::string& name, bool pass) { return Json{{"name", name}, {"pass", pass}}; }

denjoy::CutPoint parse_point(const std::string& s) {
  // "<j>L", "<j>R" for interval endpoints, "t<angle>" for generic points.
  if (s.empty()) throw PreconditionError("empty cut point");
  if (s.front() == 't') return denjoy::GenericPoint{denjoy::parse_rotation_angle(s.substr(1))};
  const char side = s.back();
  if (side != 'L' && side != 'R') throw PreconditionError("cut point '" + s + "' must end in L or R, or start with t");
  std::size_t used = 0;
  long j = 0;
  try {
    j = std::stol(s.substr(0, s.size() - 1), &used);
  } catch (const std::exception&) {
    used = std::string::npos;
  }
  if (used != s.size() - 1) throw PreconditionError("cannot parse cut point '" + s + "'");
  return denjoy::OrbitPoint{j, side == 'L' ? denjoy::Side::left : denjoy::Side::right};
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_theta(const std::string& s) {
  if (s == "golden") return (std::sqrt(5.0) - 1.0) / 2.0;
  return parse_list<double>(s, "theta").at(0);
}

Execution exec_of(const RunConfig& c) { return c.serial ? Execution::serial : Execution::parallel; }

}  // namespace

Json boundary_to_json(const fb::BoundaryVector& v) {
  Json coeffs = Json::object();
  const auto& words = fb::cylinders(v.level());
  for (std::size_t i = 0; i < words.size(); ++i)
    if (v.coeffs()[i] != 0) coeffs[words[i].letters()] = v.coeffs()[i];
  return Json{{"level", v.level()}, {"coeffs", coeffs}};
}

fb::BoundaryVector boundary_from_json(const nlohmann::json& j) {
  try {
    const auto level = j.at("level").get<std::size_t>();
    if (level == 0) throw FormatError("boundary vector: level must be >= 1");
    fb::BoundaryVector v(level);
    for (const auto& [word, c] : j.at("coeffs").items()) {
      const fb::ReducedWord w = fb::reduce(word);
      if (w.letters() != word || w.size() != level)
        throw FormatError("boundary vector: '" + word + "' is not a reduced word of length " + std::to_string(level));
      v[w] = c.get<std::int64_t>();
    }
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("boundary vector: ") + e.what());
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("boundary vector: ") + e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Truncated K-theory presentations, symbolic dynamics and weighted-shift checks", "crossk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-o,--output", c.output, "Write the result here instead of standard output");
  app.add_option("--seed", c.seed, "Seed for sampled checks (default 0)");
  app.add_flag("--serial", c.serial, "Use the serial reference kernels");

  std::function<void(std::ostream&)> action;
  auto emit_json = [&](Json j) {
    action = [j = std::move(j)](std::ostream& os) { os << j.dump(2) << '\n'; };
  };
  auto emit_text = [&](std::string s) {
    action = [s = std::move(s)](std::ostream& os) { os << s; };
  };
  auto add_source = [&](CLI::App* s) {
    s->add_option("--gen", c.gen, "Fibonacci generation; the two-sided stage gen/3 is used");
    s->add_option("--file", c.file, "Sequence file: one line of 1/2 with '|' before index 0");
  };

  // seq
  auto* seq = app.add_subcommand("seq", "Fibonacci and Sturmian sequence statistics");
  seq->require_subcommand(1);
  auto* fib = seq->add_subcommand("fib", "One-sided Fibonacci word f_n");
  fib->add_option("--n", c.n, "Generation")->required();
  fib->footer("JSON: {n, word, length, twos, seed}");
  fib->callback([&] {
    const std::string w = symdyn::fibonacci_word(c.n);
    emit_json({{"n", c.n}, {"word", w}, {"length", w.size()},
               {"twos", std::count(w.begin(), w.end(), '2')}, {"seed", c.seed}});
  });
  auto* complexity = seq->add_subcommand("complexity", "Block complexity p_k for k = 1..max-k");
  add_source(complexity);
  complexity->add_option("--max-k", c.max_k, "Largest block length");
  complexity->footer("JSON: {source, complexity: {k: p_k}, seed}");
  complexity->callback([&] {
    const auto x = load_sequence(c);
    Json table = Json::object();
    for (std::size_t k = 1; k <= c.max_k; ++k) table[std::to_string(k)] = symdyn::block_complexity(x, k);
    emit_json({{"source", source_json(c, x)}, {"complexity", table}, {"seed", c.seed}});
  });
  auto* slope = seq->add_subcommand("slope", "Frequency of 2 in [-N, N]");
  add_source(slope);
  slope->add_option("--N", c.radius, "Radius N >= 1");
  slope->footer("JSON: {source, N, slope: \"p/q\", value, seed}");
  slope->callback([&] {
    const auto x = load_sequence(c);
    const auto r = symdyn::slope_estimate(x, c.radius);
    std::ostringstream os;
    os << r;
    emit_json({{"source", source_json(c, x)}, {"N", c.radius}, {"slope", os.str()}, {"value", r.value()},
               {"seed", c.seed}});
  });
  auto* runs = seq->add_subcommand("runs", "Longest runs of each symbol");
  add_source(runs);
  runs->footer("JSON: {source, longest_run: {\"1\": r1, \"2\": r2}, seed}");
  runs->callback([&] {
    const auto x = load_sequence(c);
    emit_json({{"source", source_json(c, x)},
               {"longest_run", {{"1", symdyn::longest_run(x, '1')}, {"2", symdyn::longest_run(x, '2')}}},
               {"seed", c.seed}});
  });

  // boundary
  auto* boundary = app.add_subcommand("boundary", "Free-group boundary cylinders");
  boundary->require_subcommand(1);
  auto* act = boundary->add_subcommand("act", "Apply one generator letter to a boundary vector");
  act->add_option("--letter", c.letter, "One of a, A, b, B")->required();
  act->add_option("--word", c.word, "Start from the cylinder of this word");
  act->add_option("--level", c.level, "Level of the cylinder given by --word");
  act->add_option("--vector", c.vector_file, "JSON file {level, coeffs: {word: int}}");
  act->footer("JSON: {level, coeffs: {word: int}} (nonzero coefficients only)");
  act->callback([&] {
    if (c.letter.size() != 1 || !fb::is_letter(c.letter[0])) throw PreconditionError("--letter must be a, A, b or B");
    std::optional<fb::BoundaryVector> v;
    if (!c.vector_file.empty()) {
      std::ifstream in(c.vector_file);
      if (!in) throw FormatError("cannot open '" + c.vector_file + "'");
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("boundary vector: ") + e.what());
      }
      v = boundary_from_json(j);
    } else if (!c.word.empty()) {
      v = fb::BoundaryVector::cylinder(fb::reduce(c.word), std::max(c.level, c.word.size()));
    } else {
      throw PreconditionError("give --word or --vector");
    }
    emit_json(boundary_to_json(fb::act_generator(c.letter[0], *v)));
  });
  auto* witness = boundary->add_subcommand("witness", "Witness words for minimality and infiniteness");
  witness->add_option("--kind", c.kind, "minimality or infiniteness");
  witness->add_option("--omega", c.word, "omega (infiniteness) or the prefix (minimality)");
  witness->add_option("--target-first", c.target_first, "First letter of the target word (minimality)");
  witness->add_option("--N", c.exponent, "Exponent N (minimality)");
  witness->add_option("--s1", c.s1, "Force sigma_1 (infiniteness)");
  witness->add_option("--s2", c.s2, "Force sigma_2 (infiniteness)");
  witness->footer("JSON: {kind, word, length, exponent_sum_a, exponent_sum_b, seed}");
  witness->callback([&] {
    fb::ReducedWord g;
    const fb::ReducedWord omega = fb::reduce(c.word);
    if (c.kind == "minimality") {
      if (c.target_first.size() != 1) throw PreconditionError("--target-first must be one letter");
      g = fb::minimality_witness(omega, c.target_first[0], c.exponent);
    } else if (c.kind == "infiniteness") {
      if (c.s1.empty() != c.s2.empty()) throw PreconditionError("give both --s1 and --s2 or neither");
      if (!c.s1.empty()) {
        if (c.s1.size() != 1 || c.s2.size() != 1) throw PreconditionError("--s1/--s2 must be single letters");
        g = fb::infiniteness_witness(omega, c.s1[0], c.s2[0]);
      } else {
        g = fb::infiniteness_witness(omega);
      }
    } else {
      throw PreconditionError("--kind must be minimality or infiniteness");
    }
    emit_json({{"kind", c.kind}, {"word", g.letters()}, {"length", g.size()},
               {"exponent_sum_a", g.exponent_sum_a()}, {"exponent_sum_b", g.exponent_sum_b()}, {"seed", c.seed}});
  });

  // denjoy
  auto* dj = app.add_subcommand("denjoy", "Denjoy Cantor set model");
  dj->require_subcommand(1);
  auto add_system = [&](CLI::App* s) {
    s->add_option("--lambda", c.lambda, "Rotation angle: golden, 2pi/phi^2, <p>pi/<q> or radians");
    s->add_option("--base", c.base, "Base point a_0 in radians");
    s->add_option("--depth", c.depth, "Orbit indices |j| <= depth are tracked");
  };
  auto system = [&] { return denjoy::DenjoySystem(denjoy::parse_rotation_angle(c.lambda), c.base, c.depth); };
  auto* dist = dj->add_subcommand("distance", "Cut-point metric");
  add_system(dist);
  dist->add_option("--x", c.x, "Point: <j>L, <j>R or t<angle>")->required();
  dist->add_option("--y", c.y, "Point: <j>L, <j>R or t<angle>")->required();
  dist->footer("JSON: {value, bound, seed}");
  dist->callback([&] {
    const auto m = denjoy::denjoy_distance(parse_point(c.x), parse_point(c.y), system());
    emit_json({{"value", m.value}, {"bound", m.bound}, {"seed", c.seed}});
  });
  auto* code = dj->add_subcommand("code", "Rotation coding as a line of 1/2");
  add_system(code);
  code->add_option("--start", c.start, "Start angle");
  code->add_option("--length", c.length, "Number of symbols")->required();
  code->footer("Output: one text line of 1/2 symbols");
  code->callback([&] { emit_text(denjoy::rotation_coding(system(), c.start, c.length) + "\n"); });
  auto* measure = dj->add_subcommand("measure", "Integral of a clopen combination");
  add_system(measure);
  measure->add_option("--coeffs", c.coeffs, "c_unit,c_-n,...,c_n")->required();
  measure->footer("JSON: {value, seed}");
  measure->callback([&] {
    const auto sys = system();
    auto v = parse_list<std::int64_t>(c.coeffs, "coefficient");
    const denjoy::ClopenVector f(sys.depth(), std::move(v));
    emit_json({{"value", denjoy::measure_functional(f, sys)}, {"seed", c.seed}});
  });

  // ktheory
  auto* kt = app.add_subcommand("ktheory", "Truncated K-theory presentations");
  kt->require_subcommand(1);
  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", c.model, "point, denjoy-alpha, denjoy-both, identity or swap");
    s->add_option("--depth", c.depth, "K-window depth n");
    s->add_option("--level", c.level, "Boundary level L");
  };
  const std::string report_schema = "JSON: {model: {name, depth, level, k}, level, free_rank, torsion: [int], checks: [{name, pass}], seed}";
  auto* k0d = kt->add_subcommand("k0-direct", "K_0 from the full tensor presentation");
  add_model(k0d);
  k0d->footer(report_schema);
  k0d->callback([&] {
    const auto m = make_model(c.model, c.depth, c.level);
    emit_json(k_report(m, ktheory::pv_k0_direct(m, exec_of(c)), Json::array(), c.seed));
  });
  auto* k0r = kt->add_subcommand("k0-reduced", "K_0 from the reduced presentation on C(K,Z)^2");
  add_model(k0r);
  k0r->footer(report_schema);
  k0r->callback([&] {
    const auto m = make_model(c.model, c.depth, c.level);
    emit_json(k_report(m, ktheory::pv_k0_reduced(m, exec_of(c)), Json::array(), c.seed));
  });
  auto* ex16 = kt->add_subcommand("example16", "span{1, x_j} modulo (alpha - 1)^2 x_j");
  ex16->add_option("--depth", c.depth, "Depth n >= 1");
  ex16->footer("JSON: {depth, free_rank, torsion, checks, seed}");
  ex16->callback([&] {
    const auto g = ktheory::example16_quotient(c.depth, exec_of(c));
    const auto rank = zlattice::rank(ktheory::example16_relation_matrix(c.depth));
    const Json inv = invariants_json(g);
    emit_json({{"depth", c.depth}, {"free_rank", inv["free_rank"]}, {"torsion", inv["torsion"]},
               {"checks", Json::array({check("relations_independent", rank == 2 * c.depth - 1)})},
               {"seed", c.seed}});
  });
  auto* k1 = kt->add_subcommand("k1", "Kernel of zeta");
  add_model(k1);
  k1->footer("JSON: {model, level, kernel_rank, m_vectors, checks, seed}");
  k1->callback([&] {
    const auto m = make_model(c.model, c.depth, c.level);
    const auto z = ktheory::zeta_matrix(m);
    const auto kernel = ktheory::pv_k1_kernel(m, exec_of(c));
    const auto mv = ktheory::m_vectors(m, z);
    auto annihilated = [&](const std::vector<zlattice::IntVector>& vs) {
      for (const auto& v : vs)
        for (const auto& e : z.matrix * v)
          if (e != 0) return false;
      return true;
    };
    emit_json({{"model", model_json(m)},
               {"level", m.level()},
               {"kernel_rank", kernel.rank},
               {"m_vectors", mv.size()},
               {"checks", Json::array({check("kernel_basis_annihilated", annihilated(kernel.basis)),
                                       check("m_vectors_annihilated", !mv.empty() && annihilated(mv))})},
               {"seed", c.seed}});
  });
  auto* verify = kt->add_subcommand("verify", "Check the reduction maps on sampled relations");
  add_model(verify);
  verify->add_option("--samples", c.samples, "Number of sampled relations");
  verify->add_flag("--corrupt", c.corrupt, "Negative control: double every quad relation");
  verify->footer("JSON: {model, level, samples, candidates, out_of_window, checks: [{name, pass, total, failed}], seed}");
  verify->callback([&] {
    const auto m = make_model(c.model, c.depth, c.level);
    const auto rep = ktheory::verify_reduction(m, {c.samples, c.seed, c.corrupt});
    Json checks = Json::array();
    for (const auto& ch : rep.checks)
      checks.push_back({{"name", ch.name}, {"pass", ch.passed()}, {"total", ch.total}, {"failed", ch.failed}});
    emit_json({{"model", model_json(m)}, {"level", m.level()}, {"samples", rep.samples},
               {"candidates", rep.candidates}, {"out_of_window", rep.out_of_window}, {"checks", checks},
               {"seed", c.seed}});
  });
  auto* sweep = kt->add_subcommand("sweep", "Invariants across depths or levels");
  sweep->add_option("--family", c.family,
                    "example16 (depth), point (level), denjoy-alpha-k0 (depth, level 1) or denjoy-alpha-k1 (depth, level 1)");
  sweep->add_option("--from", c.from, "First parameter");
  sweep->add_option("--to", c.to, "Last parameter");
  sweep->add_option("--predict-free-rank", c.predict_rank, "Predicted free rank (torsion-free) for every row");
  sweep->footer("JSON: {family, rows: [{parameter, free_rank, torsion, matches}], stable_from, free_rank_strictly_increasing, seed}");
  sweep->callback([&] {
    if (c.from == 0 || c.to < c.from) throw PreconditionError("need 1 <= --from <= --to");
    std::function<zlattice::AbGroupInvariants(std::size_t)> compute;
    const auto e = exec_of(c);
    if (c.family == "example16")
      compute = [e](std::size_t n) { return ktheory::example16_quotient(n, e); };
    else if (c.family == "point")
      compute = [e](std::size_t L) { return ktheory::pv_k0_direct(ktheory::DiagonalActionModel::point(L), e); };
    else if (c.family == "denjoy-alpha-k0")
      compute = [e](std::size_t n) { return ktheory::pv_k0_direct(ktheory::DiagonalActionModel::denjoy_alpha(n, 1), e); };
    else if (c.family == "denjoy-alpha-k1")
      compute = [e](std::size_t n) {
        return zlattice::AbGroupInvariants{ktheory::pv_k1_kernel(ktheory::DiagonalActionModel::denjoy_alpha(n, 1), e).rank, {}};
      };
    else
      throw PreconditionError("unknown family '" + c.family + "'");
    std::function<std::optional<zlattice::AbGroupInvariants>(std::size_t)> prediction;
    if (c.predict_rank >= 0) {
      const auto r = static_cast<std::size_t>(c.predict_rank);
      prediction = [r](std::size_t) { return std::optional<zlattice::AbGroupInvariants>({r, {}}); };
    }
    std::vector<std::size_t> params;
    for (std::size_t p = c.from; p <= c.to; ++p) params.push_back(p);
    const auto table = ktheory::stabilization_sweep(params, compute, prediction);
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json row{{"parameter", r.parameter}};
      const Json inv = invariants_json(r.invariants);
      row["free_rank"] = inv["free_rank"];
      row["torsion"] = inv["torsion"];
      row["matches"] = r.matches_prediction ? Json(*r.matches_prediction) : Json(nullptr);
      rows.push_back(row);
    }
    emit_json({{"family", c.family}, {"rows", rows},
               {"stable_from", table.stable_from ? Json(*table.stable_from) : Json(nullptr)},
               {"free_rank_strictly_increasing", table.free_rank_strictly_increasing}, {"seed", c.seed}});
  });

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "Weighted shift checks");
  sp->require_subcommand(1);
  auto* shift = sp->add_subcommand("shift", "Polar identity T_x = T X_0, X_0 = sqrt(T_x^* T_x)");
  add_source(shift);
  shift->add_option("--window", c.window, "Half-width W used from the sequence");
  shift->footer("JSON: {source, window, shift_residual, sqrt_residual, seed}");
  shift->callback([&] {
    const auto x = load_sequence(c);
    const auto w = std::min(c.window, x.half_width());
    const auto r = shiftspec::polar_identity_check(shiftspec::WeightSequence::from_symbols(x.restricted(w)));
    emit_json({{"source", source_json(c, x)}, {"window", w}, {"shift_residual", r.shift},
               {"sqrt_residual", r.sqrt}, {"seed", c.seed}});
  });
  auto* joint = sp->add_subcommand("joint", "Joint-spectrum scores on a grid (CSV)");
  add_source(joint);
  joint->add_option("--gamma", c.gamma, "Index set, e.g. 0,1 (one or two entries)");
  joint->add_option("--lo", c.lo, "Grid lower bound");
  joint->add_option("--hi", c.hi, "Grid upper bound");
  joint->add_option("--steps", c.steps, "Grid points per axis");
  joint->footer("CSV: u,v,score (one index: lambda = u + iv; two indices: lambda = (u, v))");
  joint->callback([&] {
    const auto x = shiftspec::WeightSequence::from_symbols(load_sequence(c));
    const auto gamma = parse_list<long>(c.gamma, "index");
    std::string csv = "u,v,score\n";
    for (const auto& p : shiftspec::joint_grid(x, gamma, c.lo, c.hi, c.steps, exec_of(c)))
      csv += csv_number(p.u) + "," + csv_number(p.v) + "," + csv_number(p.score) + "\n";
    emit_text(std::move(csv));
  });
  auto* wit = sp->add_subcommand("witness", "Approximate eigenvectors for random unimodular weights (CSV)");
  wit->add_option("--n-values", c.n_values, "Comma-separated lengths n");
  wit->add_option("--count", c.count, "Number of random weight sequences");
  wit->add_option("--points", c.points, "Number of circle points lambda = e^{2 pi i (k + 1/2)/points}");
  wit->footer("CSV: sequence,point,n,residual,bound");
  wit->callback([&] {
    const auto ns = parse_list<std::size_t>(c.n_values, "n");
    if (c.count == 0 || c.points == 0) throw PreconditionError("--count and --points must be positive");
    const std::size_t top = *std::max_element(ns.begin(), ns.end());
    std::vector<shiftspec::WeightSequence> weights;
    for (std::size_t s = 0; s < c.count; ++s) weights.push_back(shiftspec::random_unimodular(top + 1, c.seed + s));
    std::vector<shiftspec::WitnessCase> cases;
    for (std::size_t s = 0; s < c.count; ++s)
      for (std::size_t k = 0; k < c.points; ++k)
        for (std::size_t n : ns)
          cases.push_back({s, std::polar(1.0, 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(c.points)), n});
    const auto res = shiftspec::witness_sweep(weights, cases, exec_of(c));
    std::string csv = "sequence,point,n,residual,bound\n";
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const std::size_t point = (i / ns.size()) % c.points;
      csv += std::to_string(cases[i].sequence) + "," + std::to_string(point) + "," + std::to_string(cases[i].n) + "," +
             csv_number(res[i]) + "," + csv_number(std::sqrt(2.0 / static_cast<double>(cases[i].n + 1))) + "\n";
    }
    emit_text(std::move(csv));
  });
  auto* per = sp->add_subcommand("periodic", "Cyclic truncation for periodic weights");
  per->add_option("--weights", c.weights, "One period of positive weights, e.g. 1,2");
  per->add_option("--repeats", c.repeats, "Number of periods m");
  per->footer("JSON: {weights, repeats, radius, max_deviation, eigenvalues: [[re, im]], seed}");
  per->callback([&] {
    const auto w = parse_list<double>(c.weights, "weight");
    const auto s = shiftspec::periodic_spectrum(w, c.repeats);
    Json eig = Json::array();
    for (const auto& z : s.eigenvalues) eig.push_back({z.real(), z.imag()});
    emit_json({{"weights", w}, {"repeats", c.repeats}, {"radius", s.radius}, {"max_deviation", s.max_deviation},
               {"eigenvalues", eig}, {"seed", c.seed}});
  });
  auto* rot = sp->add_subcommand("rotation", "x_n = 2cos(2 pi n theta) + 3 identities");
  rot->add_option("--theta", c.theta, "theta in (0, 1) or 'golden'");
  rot->add_option("--window", c.window, "Half-width W");
  rot->footer("JSON: {theta, window, sqrt_residual, commutation_residual, seed}");
  rot->callback([&] {
    const double theta = parse_theta(c.theta);
    const auto r = shiftspec::rotation_weight_check(theta, c.window);
    emit_json({{"theta", theta}, {"window", c.window}, {"sqrt_residual", r.sqrt_identity},
               {"commutation_residual", r.commutation}, {"seed", c.seed}});
  });
  auto* nonsimple = sp->add_subcommand("nonsimple", "Run-length scan for constant sequences in the orbit closure");
  add_source(nonsimple);
  nonsimple->footer("JSON: {source, rows: [{half_width, run1, run2}], not_simple, verdict, seed}");
  nonsimple->callback([&] {
    const auto x = load_sequence(c);
    const auto r = shiftspec::nonsimplicity_scan(x);
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back({{"half_width", row.half_width}, {"run1", row.run1}, {"run2", row.run2}});
    emit_json({{"source", source_json(c, x)}, {"rows", rows}, {"not_simple", r.not_simple}, {"verdict", r.verdict},
               {"seed", c.seed}});
  });

  std::vector<std::string> argv_store{"crossk"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (!action) return kExitOk;
  if (c.output.empty()) {
    action(out);
  } else {
    std::ofstream f(c.output, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << c.output << "'\n";
      return 1;
    }
    action(f);
  }
  return kExitOk;
}

}  // namespace crossk::cli
