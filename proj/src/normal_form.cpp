#include "limtower/normal_form.hpp"

#include <algorithm>
#include <tuple>

namespace limtower {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// Floor division (cpp_int's operator/ truncates toward zero).
Int fdiv(const Int& a, const Int& b) {
  Int q = a / b, r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

// Round-to-nearest division, deterministic tie break toward -inf. Balanced
// remainders keep entry growth under control during elimination.
Int rdiv(const Int& a, const Int& b) {
  Int q = fdiv(a, b), r = a - q * b; // r in [0, |b|)
  Int ab = b < 0 ? Int(-b) : b;
  if (2 * r > ab) ++q;
  return q;
}

// Deterministic pivot: smallest nonzero |value|, ties by lowest row then col.
bool find_pivot(const IntMatrix& a, std::size_t k, std::size_t& pi,
                std::size_t& pj) {
  bool found = false;
  Int best;
  for (std::size_t i = k; i < a.rows(); ++i)
    for (std::size_t j = k; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      Int v = abs_int(a(i, j));
      if (!found || v < best) {
        found = true;
        best = v;
        pi = i;
        pj = j;
      }
    }
  return found;
}

} // namespace

IntVec SnfResult::diagonal() const {
  std::size_t n = std::min(d.rows(), d.cols());
  IntVec out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = d(i, i);
  return out;
}

SnfResult snf(const IntMatrix& m) {
  SnfResult res;
  res.d = m;
  res.u = IntMatrix::identity(m.rows());
  res.v = IntMatrix::identity(m.cols());
  IntMatrix& a = res.d;
  IntMatrix& u = res.u;
  IntMatrix& v = res.v;

  std::size_t nmin = std::min(a.rows(), a.cols());
  for (std::size_t k = 0; k < nmin; ++k) {
    // Re-select the globally smallest pivot before every sweep; balanced
    // quotients plus reselection keep intermediate entries small.
    for (;;) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(a, k, pi, pj)) { k = nmin; break; }
      a.swap_rows(k, pi);
      u.swap_rows(k, pi);
      a.swap_cols(k, pj);
      v.swap_cols(k, pj);
      for (std::size_t i = k + 1; i < a.rows(); ++i) {
        if (a(i, k) == 0) continue;
        Int q = rdiv(a(i, k), a(k, k));
        a.add_row_multiple(i, k, -q);
        u.add_row_multiple(i, k, -q);
      }
      for (std::size_t j = k + 1; j < a.cols(); ++j) {
        if (a(k, j) == 0) continue;
        Int q = rdiv(a(k, j), a(k, k));
        a.add_col_multiple(j, k, -q);
        v.add_col_multiple(j, k, -q);
      }
      bool clear = true;
      for (std::size_t i = k + 1; i < a.rows() && clear; ++i)
        if (a(i, k) != 0) clear = false;
      for (std::size_t j = k + 1; j < a.cols() && clear; ++j)
        if (a(k, j) != 0) clear = false;
      if (!clear) continue;
      // Absorb an entry the pivot does not divide, so that d_k divides the
      // whole remaining block before we recurse into it.
      bool absorbed = false;
      for (std::size_t i = k + 1; i < a.rows() && !absorbed; ++i)
        for (std::size_t j = k + 1; j < a.cols() && !absorbed; ++j)
          if (a(i, j) % a(k, k) != 0) {
            a.add_row_multiple(k, i, 1);
            u.add_row_multiple(k, i, 1);
            absorbed = true;
          }
      if (!absorbed) break;
    }
    if (k == nmin) break;
  }

  // Positive diagonal.
  for (std::size_t i = 0; i < nmin; ++i)
    if (a(i, i) < 0) {
      a.negate_row(i);
      u.negate_row(i);
    }

  // Enforce the divisibility chain d_i | d_{i+1} (with d = 0 sorting last,
  // since 0 | x only for x = 0). Each fix replaces (d_i, d_j) by
  // (gcd, lcm); repeat to fixpoint.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < nmin; ++i) {
      const Int di = a(i, i), dj = a(i + 1, i + 1);
      if (dj == 0 && di == 0) continue;
      if (di != 0 && dj % di == 0) continue;
      // col_i += col_{i+1}, then re-diagonalize the 2x2 block.
      a.add_col_multiple(i, i + 1, 1);
      v.add_col_multiple(i, i + 1, 1);
      for (;;) {
        if (a(i + 1, i) == 0) break;
        if (a(i, i) != 0) {
          Int q = fdiv(a(i + 1, i), a(i, i));
          a.add_row_multiple(i + 1, i, -q);
          u.add_row_multiple(i + 1, i, -q);
        }
        if (a(i + 1, i) != 0) {
          a.swap_rows(i, i + 1);
          u.swap_rows(i, i + 1);
        }
      }
      // Row i may now have an entry at column i+1.
      if (a(i, i + 1) != 0) {
        Int q = fdiv(a(i, i + 1), a(i, i));
        a.add_col_multiple(i + 1, i, -q);
        v.add_col_multiple(i + 1, i, -q);
      }
      if (a(i + 1, i + 1) < 0) {
        a.negate_row(i + 1);
        u.negate_row(i + 1);
      }
      if (a(i, i) < 0) {
        a.negate_row(i);
        u.negate_row(i);
      }
      changed = true;
    }
  }

  res.rank = 0;
  for (std::size_t i = 0; i < nmin; ++i)
    if (a(i, i) != 0) ++res.rank;
  return res;
}

namespace {

// Row HNF with transform: T * M = H, T unimodular. Rows of H generate the
// row lattice of M; staircase with positive pivots, entries above a pivot
// reduced into [0, pivot); zero rows trailing.
void row_hnf_inplace(IntMatrix& a, IntMatrix* t) {
  std::size_t piv_row = 0;
  for (std::size_t c = 0; c < a.cols() && piv_row < a.rows(); ++c) {
    // Eliminate below piv_row in column c via gcd steps.
    for (;;) {
      std::size_t best = a.rows();
      Int bestv;
      for (std::size_t i = piv_row; i < a.rows(); ++i) {
        if (a(i, c) == 0) continue;
        Int v = abs_int(a(i, c));
        if (best == a.rows() || v < bestv) {
          best = i;
          bestv = v;
        }
      }
      if (best == a.rows()) break; // column all zero
      a.swap_rows(piv_row, best);
      if (t) t->swap_rows(piv_row, best);
      bool clean = true;
      for (std::size_t i = piv_row + 1; i < a.rows(); ++i) {
        if (a(i, c) == 0) continue;
        Int q = rdiv(a(i, c), a(piv_row, c));
        a.add_row_multiple(i, piv_row, -q);
        if (t) t->add_row_multiple(i, piv_row, -q);
        if (a(i, c) != 0) clean = false;
      }
      if (clean) {
        if (a(piv_row, c) < 0) {
          a.negate_row(piv_row);
          if (t) t->negate_row(piv_row);
        }
        // Reduce entries above the pivot into [0, pivot).
        for (std::size_t i = 0; i < piv_row; ++i) {
          Int q = fdiv(a(i, c), a(piv_row, c));
          if (q != 0) {
            a.add_row_multiple(i, piv_row, -q);
            if (t) t->add_row_multiple(i, piv_row, -q);
          }
        }
        ++piv_row;
        break;
      }
    }
  }
}

std::size_t count_nonzero_rows(const IntMatrix& a) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) {
        ++n;
        break;
      }
  return n;
}

} // namespace

IntMatrix hnf_cols(const IntMatrix& m) {
  IntMatrix a = m.transpose();
  row_hnf_inplace(a, nullptr);
  std::size_t k = count_nonzero_rows(a);
  return a.submatrix(0, 0, k, a.cols()).transpose();
}

HnfResult hnf_cols_transform(const IntMatrix& m) {
  IntMatrix a = m.transpose();
  IntMatrix t = IntMatrix::identity(a.rows());
  row_hnf_inplace(a, &t);
  std::size_t k = count_nonzero_rows(a);
  HnfResult r;
  r.h = a.submatrix(0, 0, k, a.cols()).transpose();
  r.t = t.submatrix(0, 0, k, t.cols()).transpose();
  return r;
}

bool UnsolvableCert::verify(const IntMatrix& m, const IntVec& b) const {
  if (u_row.size() != m.rows()) return false;
  IntVec um(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) um[j] += u_row[i] * m(i, j);
  Int ub = 0;
  for (std::size_t i = 0; i < m.rows(); ++i) ub += u_row[i] * b[i];
  if (modulus == 0) {
    return is_zero_vec(um) && ub != 0;
  }
  for (const auto& x : um)
    if (x % modulus != 0) return false;
  return ub % modulus != 0;
}

SolveOutcome solve(const IntMatrix& m, const IntVec& b, const Int& modulus) {
  if (b.size() != m.rows())
    throw std::invalid_argument("solve: rhs length " + std::to_string(b.size()) +
                                " does not match " + std::to_string(m.rows()) +
                                " rows");
  if (modulus != 0) {
    // Z/m: solve [M | m*I] over Z and project; reduce answers mod m.
    IntMatrix aug = IntMatrix::hstack(m, IntMatrix::identity(m.rows()) * modulus);
    SolveOutcome inner = solve(aug, b, 0);
    SolveOutcome out;
    if (!inner.solution) {
      out.certificate = inner.certificate;
      return out;
    }
    SolveResult sr;
    sr.particular.assign(inner.solution->particular.begin(),
                         inner.solution->particular.begin() + m.cols());
    sr.particular = mod_vec(sr.particular, modulus);
    IntMatrix kfull = inner.solution->kernel;
    IntMatrix ktop = kfull.rows() ? kfull.submatrix(0, 0, m.cols(), kfull.cols())
                                  : IntMatrix(m.cols(), 0);
    sr.kernel = hnf_cols(ktop);
    out.solution = std::move(sr);
    return out;
  }

  SnfResult s = snf(m);
  IntVec c = s.u * b;
  std::size_t nmin = std::min(m.rows(), m.cols());
  IntVec y(m.cols(), Int(0));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Int d = i < nmin ? s.d(i, i) : Int(0);
    if (d == 0) {
      if (c[i] != 0) {
        SolveOutcome out;
        out.certificate = UnsolvableCert{s.u.row(i), 0};
        return out;
      }
    } else if (c[i] % d != 0) {
      SolveOutcome out;
      out.certificate = UnsolvableCert{s.u.row(i), d};
      return out;
    } else if (i < m.cols()) {
      y[i] = c[i] / d;
    }
  }
  SolveResult sr;
  sr.particular = s.v * y;
  std::size_t nkernel = m.cols() - s.rank;
  IntMatrix k(m.cols(), nkernel);
  for (std::size_t j = 0; j < nkernel; ++j)
    k.set_col(j, s.v.col(s.rank + j));
  sr.kernel = k;
  SolveOutcome out;
  out.solution = std::move(sr);
  return out;
}

IntMatrix kernel_lattice(const IntMatrix& m, const Int& modulus) {
  if (modulus != 0) {
    IntMatrix aug = IntMatrix::hstack(m, IntMatrix::identity(m.rows()) * modulus);
    IntMatrix k = kernel_lattice(aug, 0);
    IntMatrix top = k.cols() ? k.submatrix(0, 0, m.cols(), k.cols())
                             : IntMatrix(m.cols(), 0);
    return hnf_cols(top);
  }
  SnfResult s = snf(m);
  std::size_t nkernel = m.cols() - s.rank;
  IntMatrix k(m.cols(), nkernel);
  for (std::size_t j = 0; j < nkernel; ++j)
    k.set_col(j, s.v.col(s.rank + j));
  return k;
}

bool lattice_contains(const IntMatrix& m, const IntVec& v, const Int& modulus) {
  return solve(m, v, modulus).solution.has_value();
}

IntMatrix lattice_intersect(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("lattice_intersect: ambient dimension mismatch");
  if (a.cols() == 0 || b.cols() == 0) return IntMatrix(a.rows(), 0);
  IntMatrix k = kernel_lattice(IntMatrix::hstack(a, -b));
  IntMatrix top = k.cols() ? k.submatrix(0, 0, a.cols(), k.cols())
                           : IntMatrix(a.cols(), 0);
  return hnf_cols(a * top);
}

IntMatrix lattice_sum(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("lattice_sum: ambient dimension mismatch");
  return hnf_cols(IntMatrix::hstack(a, b));
}

bool lattice_equal(const IntMatrix& a, const IntMatrix& b) {
  return hnf_cols(a) == hnf_cols(b);
}

IntMatrix preimage_lattice(const IntMatrix& m, const IntMatrix& l,
                           const Int& modulus) {
  if (m.rows() != l.rows())
    throw std::invalid_argument("preimage_lattice: shape mismatch");
  IntMatrix lat = l;
  if (modulus != 0)
    lat = IntMatrix::hstack(lat, IntMatrix::identity(m.rows()) * modulus);
  if (lat.cols() == 0) return kernel_lattice(m, modulus);
  IntMatrix k = kernel_lattice(IntMatrix::hstack(m, -lat));
  IntMatrix top = k.cols() ? k.submatrix(0, 0, m.cols(), k.cols())
                           : IntMatrix(m.cols(), 0);
  if (modulus != 0)
    top = IntMatrix::hstack(top, IntMatrix::identity(m.cols()) * modulus);
  return hnf_cols(top);
}

IntMatrix saturate_lattice(const IntMatrix& m) {
  // sat(col M) = Z^n ∩ span_Q(col M) = ker of the transposed cokernel basis.
  IntMatrix k = kernel_lattice(m.transpose());
  if (k.cols() == 0) return IntMatrix::identity(m.rows());
  return hnf_cols(kernel_lattice(k.transpose()));
}

IntMatrix inverse_unimodular(const IntMatrix& u) {
  if (!u.is_square()) throw std::invalid_argument("inverse of non-square");
  IntMatrix inv(u.rows(), u.rows());
  for (std::size_t j = 0; j < u.rows(); ++j) {
    IntVec e(u.rows(), Int(0));
    e[j] = 1;
    auto out = solve(u, e);
    if (!out.solution)
      throw std::invalid_argument("inverse_unimodular: matrix not invertible");
    inv.set_col(j, out.solution->particular);
  }
  return inv;
}

IntVec reduce_mod_lattice(const IntMatrix& hnf, const IntVec& v) {
  if (hnf.cols() && hnf.rows() != v.size())
    throw std::invalid_argument("reduce_mod_lattice: dimension mismatch");
  IntVec r = v;
  for (std::size_t j = 0; j < hnf.cols(); ++j) {
    std::size_t piv = 0;
    while (piv < hnf.rows() && hnf(piv, j) == 0) ++piv;
    if (piv == hnf.rows()) continue;
    Int q = fdiv(r[piv], hnf(piv, j));
    if (q != 0)
      for (std::size_t i = 0; i < hnf.rows(); ++i) r[i] -= q * hnf(i, j);
  }
  return r;
}

Int lattice_index(const IntMatrix& m) {
  IntMatrix h = hnf_cols(m);
  if (h.cols() != m.rows()) return 0;
  Int idx = 1;
  for (std::size_t j = 0; j < h.cols(); ++j) {
    std::size_t piv = 0;
    while (piv < h.rows() && h(piv, j) == 0) ++piv;
    idx *= h(piv, j);
  }
  return idx;
}

} // namespace limtower
