#ifndef CETSP_TESTS_SUPPORT_HPP
#define CETSP_TESTS_SUPPORT_HPP

// Reference implementations used only by tests. None of them share code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cetsp/cetsp.hpp"

namespace testsupport {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Small LPs: min c.x, A x (<=|>=) b, x in a box.

struct SmallLp {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<int> sense;  // +1 means <=, -1 means >=
  std::vector<double> b;
  std::vector<double> lo, hi;

  cetsp::LpProblem to_problem() const {
    cetsp::LpProblem p;
    p.num_vars = c.size();
    p.objective = c;
    for (std::size_t i = 0; i < a.size(); ++i)
      p.constraints.push_back({a[i], sense[i] > 0 ? cetsp::RowSense::le : cetsp::RowSense::ge, b[i]});
    for (std::size_t j = 0; j < c.size(); ++j) p.bounds.push_back({lo[j], hi[j]});
    return p;
  }
};

inline SmallLp random_small_lp(std::uint64_t seed) {
  cetsp::SplitMix64 rng(seed);
  SmallLp lp;
  const int nv = 2 + static_cast<int>(rng.next() % 2);
  const int nc = 1 + static_cast<int>(rng.next() % 6);
  for (int j = 0; j < nv; ++j) {
    lp.c.push_back(rng.uniform(-1, 1));
    lp.lo.push_back(std::round(rng.uniform(-5, 0)));
    lp.hi.push_back(lp.lo.back() + std::round(rng.uniform(2, 10)));
  }
  for (int i = 0; i < nc; ++i) {
    std::vector<double> row;
    for (int j = 0; j < nv; ++j) row.push_back(rng.uniform(-1, 1));
    lp.a.push_back(row);
    lp.sense.push_back(rng.uniform() < 0.7 ? 1 : -1);
    lp.b.push_back(rng.uniform(-4, 6));
  }
  return lp;
}

namespace detail {

// Exact minimum of the last coordinate with the others fixed.
inline double last_coordinate_min(const SmallLp& lp, const std::vector<double>& x) {
  const std::size_t k = lp.c.size() - 1;
  double lo = lp.lo[k], hi = lp.hi[k];
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    double rest = lp.b[i];
    for (std::size_t j = 0; j < k; ++j) rest -= lp.a[i][j] * x[j];
    const double coef = lp.a[i][k] * lp.sense[i];
    rest *= lp.sense[i];
    // coef * t <= rest
    if (std::abs(lp.a[i][k]) < 1e-15) {
      if (rest < -1e-12) return kInfinity;
    } else if (coef > 0) {
      hi = std::min(hi, rest / coef);
    } else {
      lo = std::max(lo, rest / coef);
    }
  }
  if (lo > hi + 1e-12) return kInfinity;
  double partial = 0.0;
  for (std::size_t j = 0; j < k; ++j) partial += lp.c[j] * x[j];
  return partial + std::min(lp.c[k] * lo, lp.c[k] * hi);
}

// Convex extended-value ternary search on coordinate `dim` around `guess`.
inline double refine(const SmallLp& lp, std::vector<double> x, std::size_t dim, double lo, double hi,
                     double guess);

inline double value_at(const SmallLp& lp, std::vector<double> x, std::size_t dim, double step) {
  // Minimum over all coordinates after `dim` (dim itself already fixed).
  if (dim + 1 == lp.c.size() - 1) return last_coordinate_min(lp, x);
  const std::size_t next = dim + 1;
  double best = kInfinity, arg = lp.lo[next];
  for (double t = lp.lo[next]; t <= lp.hi[next] + 1e-12; t += step) {
    x[next] = t;
    const double v = last_coordinate_min(lp, x);
    if (v < best) best = v, arg = t;
  }
  if (best == kInfinity) return kInfinity;
  return refine(lp, x, next, std::max(lp.lo[next], arg - step), std::min(lp.hi[next], arg + step), arg);
}

inline double refine(const SmallLp& lp, std::vector<double> x, std::size_t dim, double lo, double hi,
                     double guess) {
  auto f = [&](double t) {
    x[dim] = t;
    return dim + 1 == lp.c.size() - 1 ? last_coordinate_min(lp, x) : value_at(lp, x, dim, (lp.hi[dim + 1] - lp.lo[dim + 1]) / 200);
  };
  for (int it = 0; it < 100 && hi - lo > 1e-10; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    const double f1 = f(m1), f2 = f(m2);
    if (f1 == kInfinity && f2 == kInfinity) {
      if (guess < m1) hi = m1; else if (guess > m2) lo = m2; else break;
    } else if (f1 <= f2) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min(f(0.5 * (lo + hi)), f(guess));
}

}  // namespace detail

struct GridResult {
  bool feasible = false;
  double objective = kInfinity;
};

/// Grid over the leading coordinates (step = box / 2000) with the last
/// coordinate solved in closed form, then a local convex refinement around
/// the best grid cell.
inline GridResult grid_search(const SmallLp& lp) {
  const std::size_t nv = lp.c.size();
  const double step0 = (lp.hi[0] - lp.lo[0]) / 2000.0;
  std::vector<double> x(nv, 0.0);
  double best = kInfinity, arg = lp.lo[0];
  for (int i = 0; i <= 2000; ++i) {
    x[0] = lp.lo[0] + i * step0;
    double v;
    if (nv == 2) {
      v = detail::last_coordinate_min(lp, x);
    } else {
      v = kInfinity;
      const double step1 = (lp.hi[1] - lp.lo[1]) / 2000.0;
      for (int k = 0; k <= 2000; ++k) {
        x[1] = lp.lo[1] + k * step1;
        v = std::min(v, detail::last_coordinate_min(lp, x));
      }
    }
    if (v < best) best = v, arg = x[0];
  }
  GridResult r;
  if (best == kInfinity) return r;
  r.feasible = true;
  x[0] = arg;
  const double refined =
      detail::refine(lp, x, 0, std::max(lp.lo[0], arg - step0), std::min(lp.hi[0], arg + step0), arg);
  r.objective = std::min(best, refined);
  return r;
}

// ---------------------------------------------------------------------------
// TSP by enumeration.

inline double exhaustive_tsp(const cetsp::DistanceMatrix& d) {
  std::vector<int> perm(d.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInfinity;
  do {
    double c = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) c += d(perm[k], perm[(k + 1) % perm.size()]);
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

inline cetsp::DistanceMatrix random_matrix(std::size_t n, std::uint64_t seed, bool symmetric) {
  cetsp::SplitMix64 rng(seed);
  cetsp::DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (symmetric && j < i) {
        d(i, j) = d(j, i);
      } else {
        d(i, j) = std::round(rng.uniform(1, 100) * 1000) / 1000;
      }
    }
  return d;
}

// ---------------------------------------------------------------------------
// XML well-formedness: tags balance, attributes quoted, one root.

inline bool well_formed_xml(const std::string& s, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<std::string> stack;
  int roots = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return fail("text outside root");
      if (s[i] == '&') {
        const auto semi = s.find(';', i);
        if (semi == std::string::npos) return fail("bad entity");
      }
      ++i;
      continue;
    }
    const auto close = s.find('>', i);
    if (close == std::string::npos) return fail("unterminated tag");
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?")) {
      if (!tag.ends_with("?")) return fail("bad declaration");
      continue;
    }
    if (tag.starts_with("!--")) continue;
    if (tag.starts_with("/")) {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return fail("mismatched </" + name + ">");
      stack.pop_back();
      continue;
    }
    const bool self = tag.ends_with("/");
    if (self) tag.pop_back();
    std::size_t p = 0;
    while (p < tag.size() && !std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
    const std::string name = tag.substr(0, p);
    if (name.empty()) return fail("empty tag name");
    // attributes: name="value"
    while (p < tag.size()) {
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      if (p == tag.size()) break;
      const auto eq = tag.find('=', p);
      if (eq == std::string::npos || eq + 1 >= tag.size() || tag[eq + 1] != '"') return fail("bad attribute in <" + name + ">");
      const auto end = tag.find('"', eq + 2);
      if (end == std::string::npos) return fail("unterminated attribute");
      p = end + 1;
    }
    if (stack.empty()) ++roots;
    if (!self) stack.push_back(name);
  }
  if (!stack.empty()) return fail("unclosed <" + stack.back() + ">");
  if (roots != 1) return fail("expected one root element");
  return true;
}

inline std::size_t count_substr(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// CPLEX LP text reader, enough for the files export_lp writes.

struct LpTextRow {
  std::string name;
  std::vector<std::pair<std::string, double>> terms;
  std::string sense;
  double rhs = 0.0;
};

struct LpText {
  std::vector<std::pair<std::string, double>> objective;
  std::vector<LpTextRow> rows;
  std::map<std::string, std::pair<double, double>> bounds;  // explicit bounds only
  std::vector<std::string> generals, binaries;
};

namespace detail {

inline std::vector<std::pair<std::string, double>> parse_terms(const std::vector<std::string>& tok) {
  std::vector<std::pair<std::string, double>> out;
  double sign = 1.0, coef = 1.0;
  bool have_coef = false;
  for (const std::string& t : tok) {
    if (t == "+") {
      sign = 1.0;
    } else if (t == "-") {
      sign = -1.0;
    } else if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.') {
      coef = std::stod(t);
      have_coef = true;
    } else {
      out.emplace_back(t, sign * (have_coef ? coef : 1.0));
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
  }
  return out;
}

}  // namespace detail

inline LpText parse_lp_text(const std::string& text) {
  LpText lp;
  std::istringstream in(text);
  std::string line, section;
  std::string pending;  // accumulated constraint text
  auto flush_row = [&] {
    if (pending.empty()) return;
    const auto colon = pending.find(':');
    LpTextRow row;
    row.name = pending.substr(0, colon);
    row.name.erase(0, row.name.find_first_not_of(' '));
    std::istringstream ts(pending.substr(colon + 1));
    std::vector<std::string> tok;
    for (std::string t; ts >> t;) tok.push_back(t);
    row.rhs = std::stod(tok.back());
    row.sense = tok[tok.size() - 2];
    tok.resize(tok.size() - 2);
    row.terms = detail::parse_terms(tok);
    if (section == "obj")
      lp.objective = row.terms;
    else
      lp.rows.push_back(std::move(row));
    pending.clear();
  };
  while (std::getline(in, line)) {
    if (line.starts_with("\\")) continue;
    if (line == "Minimize" || line == "Subject To" || line == "Bounds" || line == "Generals" ||
        line == "Binaries" || line == "End") {
      if (section == "obj") {
        pending += " <= 0";  // reuse the row reader
        flush_row();
      }
      flush_row();
      section = line == "Minimize" ? "obj" : line;
      continue;
    }
    if (section == "obj") {
      pending += line;
    } else if (section == "Subject To") {
      if (line.find(':') != std::string::npos) flush_row();
      pending += " " + line;
    } else if (section == "Bounds") {
      std::istringstream ts(line);
      std::vector<std::string> tok;
      for (std::string t; ts >> t;) tok.push_back(t);
      if (tok.size() == 2 && tok[1] == "free")
        lp.bounds[tok[0]] = {-kInfinity, kInfinity};
      else if (tok.size() == 3 && tok[1] == "=")
        lp.bounds[tok[0]] = {std::stod(tok[2]), std::stod(tok[2])};
      else if (tok.size() == 5)
        lp.bounds[tok[2]] = {std::stod(tok[0]), std::stod(tok[4])};
    } else if (section == "Generals" || section == "Binaries") {
      std::istringstream ts(line);
      for (std::string t; ts >> t;) (section == "Generals" ? lp.generals : lp.binaries).push_back(t);
    }
  }
  return lp;
}

inline double text_row_slack(const LpTextRow& r, const std::map<std::string, double>& val) {
  double lhs = 0.0;
  for (const auto& [name, c] : r.terms) lhs += c * val.at(name);
  if (r.sense == "<=") return r.rhs - lhs;
  if (r.sense == ">=") return lhs - r.rhs;
  return -std::abs(lhs - r.rhs);
}

// ---------------------------------------------------------------------------
// Oracle fixture.

struct FixtureRow {
  int seed;
  int n;
  double optimal_cost;
};

struct Fixture {
  cetsp::GeneratorSpec spec;
  std::string region;
  double median_gap_threshold = 0.0;
  std::vector<FixtureRow> rows;
};

inline Fixture load_oracle_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cetsp::Error("missing fixture " + path);
  Fixture f;
  std::string line;
  auto value_of = [](const std::string& l, const std::string& key) {
    const auto p = l.find(key + "=");
    if (p == std::string::npos) return std::string();
    const auto start = p + key.size() + 1;
    return l.substr(start, l.find(' ', start) - start);
  };
  while (std::getline(in, line)) {
    if (line.starts_with("#")) {
      if (auto v = value_of(line, "width"); !v.empty()) f.spec.width = std::stod(v);
      if (auto v = value_of(line, "height"); !v.empty()) f.spec.height = std::stod(v);
      if (auto v = value_of(line, "r_min"); !v.empty()) f.spec.r_min = std::stod(v);
      if (auto v = value_of(line, "r_max"); !v.empty()) f.spec.r_max = std::stod(v);
      if (auto v = value_of(line, "region"); !v.empty()) f.region = v;
      if (auto v = value_of(line, "median_gap_threshold"); !v.empty()) f.median_gap_threshold = std::stod(v);
      continue;
    }
    if (line.empty() || line.starts_with("seed")) continue;
    FixtureRow r{};
    std::sscanf(line.c_str(), "%d,%d,%lf", &r.seed, &r.n, &r.optimal_cost);
    f.rows.push_back(r);
  }
  return f;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace testsupport

#endif  // CETSP_TESTS_SUPPORT_HPP
