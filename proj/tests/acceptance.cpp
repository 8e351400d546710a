// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cli.hpp"
#include "crossk/denjoy.hpp"
#include "crossk/freeboundary.hpp"
#include "crossk/ktheory.hpp"
#include "crossk/shiftspec.hpp"
#include "crossk/symdyn.hpp"
#include "crossk/zlattice.hpp"

using namespace crossk;

namespace {

constexpr double kExample16Seconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kComplexitySeconds = 1.0;
constexpr double kWitnessSeconds = 10.0;
constexpr double kSlopeConstantTol = 1e-12;
constexpr double kWitnessSlack = 1e-9;
constexpr double kIdentityTol = 1e-12;
constexpr double kPeriodicTol = 1e-9;
constexpr double kJointGap = 0.25;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void guarded(int id, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(id, name, ok, detail);
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::set<std::string> factors(const std::string& w, std::size_t k) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + k <= w.size(); ++i) out.insert(w.substr(i, k));
  return out;
}

std::pair<bool, std::string> example16() {
  const auto t0 = Clock::now();
  for (int n = 1; n <= 50; ++n) {
    std::ostringstream out, err;
    const int code = cli::run({"ktheory", "example16", "--depth", std::to_string(n)}, out, err);
    if (code != 0) return {false, "exit " + std::to_string(code) + " at depth " + std::to_string(n)};
    const auto j = nlohmann::json::parse(out.str());
    if (j["free_rank"] != 3 || !j["torsion"].empty()) return {false, "depth " + std::to_string(n) + ": " + out.str()};
  }
  const double s = seconds_since(t0);
  return {s < kExample16Seconds, "Z^3 for depths 1..50 in " + fmt(s) + " s"};
}

std::pair<bool, std::string> oracle_equivalence() {
  using M = ktheory::DiagonalActionModel;
  const auto t0 = Clock::now();
  int cases = 0;
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t L = 1; L <= 3; ++L)
      for (const auto& m : {M::point(L), M::denjoy_alpha(n, L), M::denjoy_both(n, L)}) {
        const auto direct = ktheory::pv_k0_direct(m, Execution::parallel);
        const auto reduced = ktheory::pv_k0_reduced(m, Execution::parallel);
        if (!(direct == reduced)) {
          std::ostringstream os;
          os << m.name() << " n=" << n << " L=" << L << ": " << direct << " vs " << reduced;
          return {false, os.str()};
        }
        ++cases;
      }
  const double s = seconds_since(t0);
  return {s < kOracleSeconds, std::to_string(cases) + " cases equal in " + fmt(s) + " s"};
}

std::pair<bool, std::string> point_stabilizes() {
  const zlattice::IntMatrix m{{0, 0, -1, -1}, {0, 0, -1, -1}, {-1, -1, 0, 0}, {-1, -1, 0, 0}};
  const auto f = zlattice::invariant_factors(m);
  const bool oracle = f == zlattice::IntVector{1, 1};
  const auto oracle_group = zlattice::cokernel_invariants({4, m});
  const zlattice::AbGroupInvariants expected{2, {}};
  const auto table = ktheory::stabilization_sweep(
      {1, 2, 3, 4, 5},
      [](std::size_t L) { return ktheory::pv_k0_direct(ktheory::DiagonalActionModel::point(L)); },
      [&](std::size_t) -> std::optional<zlattice::AbGroupInvariants> { return expected; });
  std::ostringstream os;
  os << "4x4 oracle factors [1,1]: " << (oracle ? "yes" : "no") << ", oracle cokernel " << oracle_group
     << ", direct levels 1..5 stable from "
     << (table.stable_from ? std::to_string(*table.stable_from) : std::string("never"));
  const bool ok = oracle && oracle_group == expected && table.stable_from && *table.stable_from <= 2;
  return {ok, os.str()};
}

std::pair<bool, std::string> reduction_maps() {
  const auto model = ktheory::DiagonalActionModel::denjoy_alpha(6, 3);
  ktheory::VerifyOptions opt;
  opt.samples = 200;
  opt.seed = 0;
  const auto good = ktheory::verify_reduction(model, opt);
  std::size_t membership = 0, membership_failed = 0;
  bool identities = true;
  for (const auto& c : good.checks) {
    if (c.name == "phi_relation_membership") {
      membership = c.total;
      membership_failed = c.failed;
    } else {
      identities = identities && c.passed();
    }
  }
  opt.corrupt_relations = true;
  const auto bad = ktheory::verify_reduction(model, opt);
  const bool ok = membership == 200 && membership_failed == 0 && identities && good.all_passed() && !bad.all_passed();
  return {ok, std::to_string(membership - membership_failed) + "/" + std::to_string(membership) +
                  " memberships, identities " + (identities ? "pass" : "fail") + ", corrupted control " +
                  (bad.all_passed() ? "passes (bad)" : "fails")};
}

std::pair<bool, std::string> k1_evidence() {
  std::string ranks;
  bool ok = true;
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto model = ktheory::DiagonalActionModel::denjoy_alpha(n, 1);
    const auto zeta = ktheory::zeta_matrix(model);
    const auto k1 = ktheory::pv_k1_kernel(model, Execution::parallel);
    const auto mv = ktheory::m_vectors(model, zeta);
    bool zero = mv.size() == 2 * n;
    for (const auto& v : mv)
      for (const auto& c : zeta.matrix * v) zero = zero && c == 0;
    ok = ok && k1.rank >= 2 * n && zero;
    ranks += (ranks.empty() ? "" : ",") + std::to_string(k1.rank);
  }
  return {ok, "kernel ranks n=2..8: " + ranks + "; M-vectors annihilated"};
}

std::pair<bool, std::string> sturmian() {
  const auto t0 = Clock::now();
  const auto x = symdyn::two_sided_fibonacci(5);
  for (std::size_t k = 1; k <= 30; ++k)
    if (symdyn::block_complexity(x, k) != k + 1)
      return {false, "p_" + std::to_string(k) + " = " + std::to_string(symdyn::block_complexity(x, k))};
  const double s = seconds_since(t0);
  return {s < kComplexitySeconds, "p_k = k+1 for k = 1..30 in " + fmt(s) + " s"};
}

std::pair<bool, std::string> slope() {
  const auto x = symdyn::two_sided_fibonacci(5);
  const long double c = (3.0L - std::sqrt(5.0L)) / 2.0L;
  if (std::fabs(static_cast<double>(c) - 0.3819660112501051) > kSlopeConstantTol) return {false, "constant"};
  long double worst = 0;
  for (std::size_t N = 8; N <= 512; N *= 2) {
    const auto r = symdyn::slope_estimate(x, N);
    const long double err = std::fabs(static_cast<long double>(r.num) / static_cast<long double>(r.den) - c);
    if (err > 2.0L / static_cast<long double>(N)) return {false, "N=" + std::to_string(N)};
    worst = std::max(worst, err * static_cast<long double>(N));
  }
  return {true, "max N*|error| = " + fmt(static_cast<double>(worst)) + " (bound 2)"};
}

std::pair<bool, std::string> coding() {
  const denjoy::DenjoySystem sys(denjoy::golden_angle(), 0.0, 4);
  const std::string word = denjoy::rotation_coding(sys, 0.1234, 5000);
  const std::string fib = symdyn::fibonacci_word(21);
  for (std::size_t k = 1; k <= 8; ++k)
    if (factors(word, k) != factors(fib, k)) return {false, "factor sets differ at length " + std::to_string(k)};
  return {true, "factor sets equal for lengths 1..8"};
}

std::pair<bool, std::string> unimodular() {
  const auto t0 = Clock::now();
  std::vector<shiftspec::WeightSequence> ws;
  for (std::uint64_t s = 0; s < 20; ++s) ws.push_back(shiftspec::random_unimodular(801, 1000 + s));
  std::vector<shiftspec::WitnessCase> cases;
  for (std::size_t i = 0; i < ws.size(); ++i)
    for (int k = 0; k < 8; ++k)
      for (std::size_t n : {50u, 200u, 800u})
        cases.push_back({i, std::polar(1.0, 2 * std::numbers::pi * (k + 0.5) / 8.0), n});
  const auto res = shiftspec::witness_sweep(ws, cases, Execution::parallel);
  double margin = 1e300;
  bool ok = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const double bound = std::sqrt(2.0 / static_cast<double>(cases[i].n + 1));
    ok = ok && res[i] <= bound + kWitnessSlack;
    margin = std::min(margin, bound + kWitnessSlack - res[i]);
  }
  const double s = seconds_since(t0);
  return {ok && s < kWitnessSeconds,
          std::to_string(cases.size()) + " residuals within bound (min margin " + fmt(margin) + ") in " + fmt(s) + " s"};
}

std::pair<bool, std::string> identities() {
  const auto x = shiftspec::WeightSequence::from_symbols(symdyn::two_sided_fibonacci(5).restricted(128));
  const auto polar = shiftspec::polar_identity_check(x);
  const auto rot = shiftspec::rotation_weight_check((std::sqrt(5.0) - 1.0) / 2.0, 128);
  const bool ok = polar.max() <= kIdentityTol && rot.max() <= kIdentityTol;
  return {ok, "polar " + fmt(polar.max()) + ", rotation " + fmt(rot.max())};
}

std::pair<bool, std::string> periodic() {
  const auto a = shiftspec::periodic_spectrum(std::vector<double>{1.0, 2.0}, 20);
  const auto b = shiftspec::periodic_spectrum(std::vector<double>{1.0, 1.0, 2.0}, 20);
  double da = 0, db = 0;
  for (const auto& mu : a.eigenvalues) da = std::max(da, std::fabs(std::abs(mu) - std::sqrt(2.0)));
  for (const auto& mu : b.eigenvalues) db = std::max(db, std::fabs(std::abs(mu) - std::cbrt(2.0)));
  const bool ok = da <= kPeriodicTol && db <= kPeriodicTol && a.eigenvalues.size() == 40 && b.eigenvalues.size() == 60;
  return {ok, "(1,2): " + fmt(da) + ", (1,1,2): " + fmt(db)};
}

std::pair<bool, std::string> joint() {
  const auto seq = symdyn::two_sided_fibonacci(4);
  const auto x = shiftspec::WeightSequence::from_symbols(seq);
  std::set<std::pair<double, double>> pairs;
  for (long j = seq.lo(); j < seq.hi(); ++j) pairs.insert({double(seq[j]), double(seq[j + 1])});
  const auto grid = shiftspec::joint_grid(x, {0, 1}, 0.5, 2.5, 41, Execution::parallel);
  std::size_t zeros = 0, hits = 0;
  double s22 = -1;
  bool ok = grid.size() == 41 * 41;
  for (const auto& g : grid) {
    if (g.score == 0.0) ++zeros;
    if (pairs.count({g.u, g.v})) {
      ++hits;
      ok = ok && g.score == 0.0;
    }
    if (g.u == 2.0 && g.v == 2.0) s22 = g.score;
  }
  ok = ok && hits == pairs.size() && zeros == pairs.size() && s22 >= kJointGap;
  return {ok, std::to_string(hits) + " occurring pairs scored 0, score(2,2) = " + fmt(s22)};
}

std::pair<bool, std::string> witness_words() {
  std::mt19937 rng(2024);
  const std::string alphabet = "aAbB";
  auto inv = [](char c) { return static_cast<char>(c ^ 0x20); };
  for (int t = 0; t < 100; ++t) {
    std::string omega;
    const std::size_t len = 1 + rng() % 8;
    while (omega.size() < len) {
      const char c = alphabet[rng() % 4];
      if (!omega.empty() && omega.back() == inv(c)) continue;
      omega.push_back(c);
    }
    const auto g = freeboundary::infiniteness_witness(freeboundary::reduce(omega)).letters();
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i] == inv(g[i - 1])) return {false, "not reduced: " + g};
    long ea = 0, eb = 0;
    for (char c : g) {
      ea += c == 'a' ? 1 : c == 'A' ? -1 : 0;
      eb += c == 'b' ? 1 : c == 'B' ? -1 : 0;
    }
    if (ea != 0 || eb != 0) return {false, "exponent sums of " + g};
    // g starts with omega and does not cancel against it, so g.omega has
    // omega as a proper prefix.
    if (g.size() <= omega.size() || g.compare(0, omega.size(), omega) != 0 || g.back() == inv(omega.front()))
      return {false, "prefix containment: " + g + " for " + omega};
  }
  return {true, "100 random witnesses reduced, balanced, strictly nested"};
}

}  // namespace

int main() {
  guarded(1, "example16 quotient", example16);
  guarded(2, "direct and reduced K0 presentations agree", oracle_equivalence);
  guarded(3, "point model stabilizes to Z^2", point_stabilizes);
  guarded(4, "reduction maps", reduction_maps);
  guarded(5, "K1 kernel and M-vectors", k1_evidence);
  guarded(6, "Sturmian block complexity", sturmian);
  guarded(7, "Fibonacci slope", slope);
  guarded(8, "Denjoy coding factors", coding);
  guarded(9, "unimodular approximate eigenvectors", unimodular);
  guarded(10, "polar and rotation identities", identities);
  guarded(11, "periodic weights", periodic);
  guarded(12, "joint spectrum grid", joint);
  guarded(13, "infiniteness witness words", witness_words);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
