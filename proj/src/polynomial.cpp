#include "limtower/polynomial.hpp"

#include "limtower/normal_form.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace limtower {

namespace {
Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }
} // namespace

IntPoly IntPoly::from_coeffs(std::vector<Int> coeffs) {
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  return IntPoly{std::move(coeffs)};
}

Int IntPoly::eval(const Int& x) const {
  Int v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

IntMatrix IntPoly::eval(const IntMatrix& a) const {
  if (!a.is_square()) throw std::invalid_argument("poly eval at non-square");
  IntMatrix v = IntMatrix::zero(a.rows(), a.rows());
  for (std::size_t i = c.size(); i-- > 0;) {
    v = v * a;
    for (std::size_t d = 0; d < a.rows(); ++d) v(d, d) += c[i];
  }
  return v;
}

std::string IntPoly::to_string() const {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!first) os << (c[i] > 0 ? " + " : " - ");
    else if (c[i] < 0) os << "-";
    Int a = abs_int(c[i]);
    if (a != 1 || i == 0) os << a;
    if (i >= 1) os << "t";
    if (i >= 2) os << "^" << i;
    first = false;
  }
  return os.str();
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> c(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size()) c[i] += a.c[i];
    if (i < b.c.size()) c[i] += b.c[i];
  }
  return IntPoly::from_coeffs(std::move(c));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<Int> c(std::max(a.c.size(), b.c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size()) c[i] += a.c[i];
    if (i < b.c.size()) c[i] -= b.c[i];
  }
  return IntPoly::from_coeffs(std::move(c));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly{};
  std::vector<Int> c(a.c.size() + b.c.size() - 1);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
  return IntPoly::from_coeffs(std::move(c));
}

std::optional<IntPoly> divide_exact(const IntPoly& f, const IntPoly& g) {
  if (!g.is_monic()) return std::nullopt;
  if (f.is_zero()) return IntPoly{};
  if (f.degree() < g.degree()) return std::nullopt;
  std::vector<Int> rem = f.c;
  std::size_t dg = static_cast<std::size_t>(g.degree());
  std::vector<Int> q(f.c.size() - dg);
  for (std::size_t i = rem.size(); i-- > dg;) {
    Int coef = rem[i];
    q[i - dg] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= dg; ++j) rem[i - dg + j] -= coef * g.c[j];
  }
  for (std::size_t j = 0; j < dg; ++j)
    if (rem[j] != 0) return std::nullopt;
  return IntPoly::from_coeffs(std::move(q));
}

IntPoly char_poly(const IntMatrix& a) {
  if (!a.is_square()) throw std::invalid_argument("char_poly of non-square");
  std::size_t n = a.rows();
  // Berkowitz iteration: p_r = T_r * p_{r-1}, coefficients descending.
  std::vector<Int> p{Int(1)};
  for (std::size_t r = 1; r <= n; ++r) {
    std::vector<Int> t(r + 1);
    t[0] = 1;
    t[1] = -a(r - 1, r - 1);
    if (r >= 2) {
      IntVec w(r - 1);
      for (std::size_t i = 0; i < r - 1; ++i) w[i] = a(i, r - 1);
      for (std::size_t k = 2; k <= r; ++k) {
        Int dot = 0;
        for (std::size_t i = 0; i < r - 1; ++i) dot += a(r - 1, i) * w[i];
        t[k] = -dot;
        if (k < r) {
          IntVec w2(r - 1);
          for (std::size_t i = 0; i < r - 1; ++i)
            for (std::size_t j = 0; j < r - 1; ++j) w2[i] += a(i, j) * w[j];
          w = std::move(w2);
        }
      }
    }
    std::vector<Int> next(r + 1);
    for (std::size_t i = 0; i <= r; ++i)
      for (std::size_t j = 0; j < p.size() && j <= i; ++j)
        next[i] += t[i - j] * p[j];
    p = std::move(next);
  }
  std::vector<Int> asc(p.rbegin(), p.rend());
  return IntPoly::from_coeffs(std::move(asc));
}

namespace {

// All positive divisors of |n| (n != 0), via trial division then Pollard rho.
void factor_into(Int n, std::map<Int, int>& primes);

Int pollard_rho(const Int& n) {
  if (n % 2 == 0) return 2;
  for (Int c = 1; ; ++c) {
    Int x = 2, y = 2, d = 1;
    int steps = 0;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      Int diff = x > y ? Int(x - y) : Int(y - x);
      d = diff == 0 ? n : gcd(diff, n);
      if (++steps > 1 << 20)
        throw std::runtime_error("integer factorization budget exceeded");
    }
    if (d != n) return d;
  }
}

bool miller_rabin(const Int& n) {
  if (n < 2) return false;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  Int d = n - 1;
  int s = 0;
  while (d % 2 == 0) { d /= 2; ++s; }
  for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    Int x = powm(Int(a), d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = x * x % n;
      if (x == n - 1) { witness = false; break; }
    }
    if (witness) return false;
  }
  return true;
}

void factor_into(Int n, std::map<Int, int>& primes) {
  for (Int p = 2; p * p <= n && p < 100000; ++p)
    while (n % p == 0) { ++primes[p]; n /= p; }
  if (n == 1) return;
  if (miller_rabin(n)) { ++primes[n]; return; }
  Int d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

std::vector<Int> all_divisors(const Int& n) {
  std::map<Int, int> primes;
  factor_into(abs_int(n), primes);
  std::vector<Int> divs{Int(1)};
  for (const auto& [p, e] : primes) {
    std::size_t base = divs.size();
    Int pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// Lagrange interpolation through (x_i, y_i); integer result or nullopt.
std::optional<IntPoly> interpolate_integer(const std::vector<Int>& xs,
                                           const std::vector<Int>& ys) {
  std::size_t n = xs.size();
  // Rational arithmetic via a common denominator: work with num/den pairs.
  // Build sum of y_i * prod_{j!=i} (t - x_j) / (x_i - x_j).
  std::vector<Int> num(n, Int(0)); // accumulated numerator coefficients
  Int den = 1;
  for (std::size_t i = 0; i < n; ++i) {
    IntPoly basis = IntPoly::one();
    Int d = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      basis = basis * IntPoly::from_coeffs({-xs[j], Int(1)});
      d *= xs[i] - xs[j];
    }
    // accumulate y_i/d * basis into num/den
    Int g = gcd(den, d);
    Int scale_old = d / g, scale_new = den / g;
    for (auto& c : num) c *= scale_old;
    den *= scale_old;
    for (std::size_t k = 0; k < basis.c.size(); ++k)
      num[k] += ys[i] * scale_new * basis.c[k];
  }
  for (auto& c : num) {
    if (c % den != 0) return std::nullopt;
    c /= den;
  }
  return IntPoly::from_coeffs(std::move(num));
}

// One monic factor of degree in [1, deg/2], or nullopt if irreducible.
std::optional<IntPoly> find_factor(const IntPoly& f) {
  int deg = f.degree();
  if (deg <= 1) return std::nullopt;
  // Linear factors: rational root theorem (monic: integer roots divide f(0)).
  if (f.constant() == 0)
    return IntPoly::from_coeffs({Int(0), Int(1)}); // t divides
  for (const Int& d : all_divisors(f.constant())) {
    for (int sign : {1, -1}) {
      Int r = sign * d;
      if (f.eval(r) == 0)
        return IntPoly::from_coeffs({-r, Int(1)});
    }
  }
  // Kronecker search for factors of degree s >= 2.
  for (int s = 2; s <= deg / 2; ++s) {
    std::vector<Int> xs;
    for (int k = 0; static_cast<int>(xs.size()) < s + 1; ++k) {
      Int x = (k % 2 == 0) ? Int(k / 2) : Int(-(k / 2 + 1));
      if (f.eval(x) != 0) xs.push_back(x); // roots were already stripped
      if (k > 4 * (s + 2)) throw std::runtime_error("Kronecker point budget");
    }
    std::vector<std::vector<Int>> choices(xs.size());
    std::size_t total = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (const Int& d : all_divisors(f.eval(xs[i]))) {
        choices[i].push_back(d);
        choices[i].push_back(-d);
      }
      total *= choices[i].size();
      if (total > 4000000)
        throw std::runtime_error("Kronecker divisor budget exceeded");
    }
    std::vector<std::size_t> idx(xs.size(), 0);
    for (;;) {
      std::vector<Int> ys(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = choices[i][idx[i]];
      if (auto g = interpolate_integer(xs, ys);
          g && g->degree() == s && g->is_monic()) {
        if (divide_exact(f, *g)) return g;
      }
      std::size_t pos = 0;
      while (pos < idx.size() && ++idx[pos] == choices[pos].size()) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == idx.size()) break;
    }
  }
  return std::nullopt;
}

} // namespace

std::vector<IntPoly> factor_monic(const IntPoly& f) {
  if (!f.is_monic()) throw std::invalid_argument("factor_monic: not monic");
  std::vector<IntPoly> out;
  std::vector<IntPoly> stack{f};
  while (!stack.empty()) {
    IntPoly cur = stack.back();
    stack.pop_back();
    if (cur.degree() == 0) continue;
    auto g = find_factor(cur);
    if (!g) {
      out.push_back(cur);
      continue;
    }
    stack.push_back(*g);
    stack.push_back(*divide_exact(cur, *g));
  }
  std::sort(out.begin(), out.end(), [](const IntPoly& a, const IntPoly& b) {
    return a.c < b.c;
  });
  return out;
}

UnitSplit unit_split(const IntPoly& monic) {
  UnitSplit s{IntPoly::one(), IntPoly::one()};
  for (const auto& g : factor_monic(monic)) {
    Int c0 = g.constant();
    if (c0 == 1 || c0 == -1)
      s.unit = s.unit * g;
    else
      s.rest = s.rest * g;
  }
  return s;
}

IntMatrix eventual_image_lattice(const IntMatrix& e) {
  if (!e.is_square())
    throw std::invalid_argument("eventual_image_lattice: non-square");
  UnitSplit s = unit_split(char_poly(e));
  if (s.unit.degree() == 0) return IntMatrix(e.rows(), 0);
  return hnf_cols(kernel_lattice(s.unit.eval(e)));
}

} // namespace limtower
