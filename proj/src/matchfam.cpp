#include "ldcforge/matchfam.hpp"

#include <algorithm>
#include <random>

#include "ldcforge/errors.hpp"
#include "ldcforge/intfactor.hpp"
#include "ldcforge/util.hpp"

namespace ldcforge::matchfam {

namespace {

uint64_t submod(uint64_t a, uint64_t b, uint64_t p) { return (a + p - b % p) % p; }

uint64_t invmod(uint64_t a, uint64_t p) { return intfactor::powmod_u64(a % p, p - 2, p); }

// Square root mod an odd prime; p - 1 (as a sentinel) is never a root, so
// the caller tests the return against the residue directly.
std::optional<uint64_t> sqrt_mod(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (intfactor::powmod_u64(a, (p - 1) / 2, p) != 1) return std::nullopt;
  if (p % 4 == 3) return intfactor::powmod_u64(a, (p + 1) / 4, p);
  // Tonelli-Shanks with the smallest quadratic non-residue as generator.
  uint64_t s = 0, q = p - 1;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  uint64_t z = 2;
  while (intfactor::powmod_u64(z, (p - 1) / 2, p) != p - 1) ++z;
  uint64_t big_m = s;
  uint64_t c = intfactor::powmod_u64(z, q, p);
  uint64_t t = intfactor::powmod_u64(a, q, p);
  uint64_t r = intfactor::powmod_u64(a, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tmp = t;
    while (tmp != 1) {
      tmp = intfactor::mulmod_u64(tmp, tmp, p);
      ++i;
    }
    uint64_t b = intfactor::powmod_u64(c, uint64_t(1) << (big_m - i - 1), p);
    big_m = i;
    c = intfactor::mulmod_u64(b, b, p);
    t = intfactor::mulmod_u64(t, c, p);
    r = intfactor::mulmod_u64(r, b, p);
  }
  return r;
}

using Matrix = std::vector<std::vector<uint64_t>>;

Matrix identity(size_t n) {
  Matrix id(n, std::vector<uint64_t>(n, 0));
  for (size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

Matrix matrix_inverse(const Matrix& in, uint64_t p) {
  const size_t n = in.size();
  Matrix aug(n, std::vector<uint64_t>(2 * n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug[i][j] = in[i][j] % p;
    aug[i][n + i] = 1;
  }
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && aug[piv][c] == 0) ++piv;
    if (piv == n) throw InternalError("congruence transform is singular");
    std::swap(aug[c], aug[piv]);
    const uint64_t inv = invmod(aug[c][c], p);
    for (auto& x : aug[c]) x = intfactor::mulmod_u64(x, inv, p);
    for (size_t r = 0; r < n; ++r) {
      if (r == c || aug[r][c] == 0) continue;
      const uint64_t f = aug[r][c];
      for (size_t j = 0; j < 2 * n; ++j)
        aug[r][j] = submod(aug[r][j], intfactor::mulmod_u64(f, aug[c][j], p), p);
    }
  }
  Matrix out(n, std::vector<uint64_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

// Realization of J_n - I_n over the prime field: rows V with V^T V = J - I
// mod p, via symmetric congruence diagonalization P^T G P = D and a
// two-square split of each nonzero diagonal entry. At most 2n rows.
Matrix gram_realize(size_t n, uint64_t p) {
  Matrix m_work(n, std::vector<uint64_t>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) m_work[i][j] = (i == j) ? 0 : 1 % p;
  Matrix transform = identity(n);

  for (size_t k = 0; k < n; ++k) {
    if (m_work[k][k] == 0) {
      size_t j = k + 1;
      while (j < n && m_work[j][j] == 0) ++j;
      if (j < n) {
        // Congruence swap of k and j.
        for (size_t r = 0; r < n; ++r) std::swap(m_work[r][k], m_work[r][j]);
        for (size_t r = 0; r < n; ++r) std::swap(m_work[k][r], m_work[j][r]);
        for (size_t r = 0; r < n; ++r) std::swap(transform[r][k], transform[r][j]);
      } else {
        j = k + 1;
        while (j < n && m_work[k][j] == 0) ++j;
        if (j == n) continue;  // zero row from k on; diagonal entry stays 0
        // Add column and row j into k to create a pivot (2*M[k][j] != 0 in
        // odd characteristic).
        for (size_t r = 0; r < n; ++r) m_work[r][k] = (m_work[r][k] + m_work[r][j]) % p;
        for (size_t r = 0; r < n; ++r) m_work[k][r] = (m_work[k][r] + m_work[j][r]) % p;
        for (size_t r = 0; r < n; ++r) transform[r][k] = (transform[r][k] + transform[r][j]) % p;
      }
    }
    const uint64_t pinv = invmod(m_work[k][k], p);
    for (size_t j = k + 1; j < n; ++j) {
      const uint64_t fct = intfactor::mulmod_u64(m_work[k][j], pinv, p);
      if (fct == 0) continue;
      for (size_t r = 0; r < n; ++r)
        m_work[r][j] = submod(m_work[r][j], intfactor::mulmod_u64(fct, m_work[r][k], p), p);
      for (size_t r = 0; r < n; ++r)
        m_work[j][r] = submod(m_work[j][r], intfactor::mulmod_u64(fct, m_work[k][r], p), p);
      for (size_t r = 0; r < n; ++r)
        transform[r][j] = submod(transform[r][j], intfactor::mulmod_u64(fct, transform[r][k], p), p);
    }
  }

  // W rows: one per nonzero square component of each diagonal entry.
  std::vector<std::pair<size_t, uint64_t>> w_rows;  // (column, value)
  for (size_t i = 0; i < n; ++i) {
    const uint64_t d = m_work[i][i];
    if (d == 0) continue;
    const auto [x, y] = sum_of_two_squares(d, p);
    if (x != 0) w_rows.emplace_back(i, x);
    if (y != 0) w_rows.emplace_back(i, y);
  }

  // V = W * P^{-1}; W rows have a single nonzero entry, so each output row
  // is a scaled row of P^{-1}.
  const Matrix pinv_mat = matrix_inverse(transform, p);
  Matrix v(w_rows.size(), std::vector<uint64_t>(n));
  for (size_t r = 0; r < w_rows.size(); ++r) {
    const auto [col, val] = w_rows[r];
    for (size_t c = 0; c < n; ++c) v[r][c] = intfactor::mulmod_u64(val, pinv_mat[col][c], p);
  }
  return v;
}

}  // namespace

MatchingCheck verify_matching(const MatchingFamily& f) {
  MatchingCheck check;
  if (f.m < 2) {
    check.ok = false;
    check.reason = "modulus must be at least 2";
    return check;
  }
  const size_t n = f.vectors.size();
  for (size_t i = 0; i < n; ++i) {
    if (f.vectors[i].size() != f.h) {
      check.ok = false;
      check.i = i + 1;
      check.j = i + 1;
      check.reason = "vector dimension differs from h";
      return check;
    }
  }
  auto inner = [&](size_t i, size_t j) {
    uint64_t acc = 0;
    for (size_t l = 0; l < f.h; ++l) {
      const uint64_t prod =
          intfactor::mulmod_u64(f.vectors[i][l] % f.m, f.vectors[j][l] % f.m, f.m);
      acc += prod;
      if (acc >= f.m) acc -= f.m;
    }
    return acc;
  };
  for (size_t i = 0; i < n; ++i) {
    const uint64_t self = inner(i, i);
    if (self != 0) {
      check.ok = false;
      check.i = i + 1;
      check.j = i + 1;
      check.value = self;
      check.reason = "self inner product is nonzero";
      return check;
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const uint64_t cross = inner(i, j);
      if (!std::binary_search(f.target_set.begin(), f.target_set.end(), cross)) {
        check.ok = false;
        check.i = i + 1;
        check.j = j + 1;
        check.value = cross;
        check.reason = "cross inner product outside the target set";
        return check;
      }
    }
  }
  return check;
}

std::pair<uint64_t, uint64_t> sum_of_two_squares(uint64_t d, uint64_t p) {
  d %= p;
  for (uint64_t x = 0; x < p; ++x) {
    const uint64_t rem = submod(d, intfactor::mulmod_u64(x, x, p), p);
    if (auto y = sqrt_mod(rem, p)) return {x, *y};
  }
  throw InternalError("two-square split failed over a prime field");
}

MatchingFamily gram_family(uint64_t m, size_t n) {
  const auto prof = modulus::profile(m);
  if (prof.primes.size() != 2)
    throw InvalidModulus("gram family requires a modulus with exactly two prime factors");
  if (n < 1) throw InvalidModulus("gram family requires n >= 1");
  const uint64_t p = prof.primes[0], q = prof.primes[1];

  Matrix vp = gram_realize(n, p);
  Matrix vq = gram_realize(n, q);
  size_t h = std::max(vp.size(), vq.size());
  if (h == 0) h = 1;  // n = 1: keep a concrete zero coordinate
  vp.resize(h, std::vector<uint64_t>(n, 0));
  vq.resize(h, std::vector<uint64_t>(n, 0));

  MatchingFamily fam;
  fam.m = m;
  fam.h = h;
  fam.target_set = prof.canonical;
  fam.vectors.assign(n, std::vector<uint64_t>(h, 0));
  for (size_t r = 0; r < h; ++r)
    for (size_t i = 0; i < n; ++i)
      fam.vectors[i][r] = modulus::crt_u64({vp[r][i], vq[r][i]}, {p, q});

  // The Gram matrix must be exactly J - I mod m.
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      uint64_t acc = 0;
      for (size_t l = 0; l < h; ++l) {
        acc += intfactor::mulmod_u64(fam.vectors[i][l], fam.vectors[j][l], m);
        if (acc >= m) acc -= m;
      }
      const uint64_t want = (i == j) ? 0 : 1;
      if (acc != want) throw InternalError("gram realization deviates from J - I");
    }
  }
  return fam;
}

MatchingFamily greedy_search(uint64_t m, size_t h, size_t target_n, uint64_t seed,
                             uint64_t budget) {
  if (h < 2) throw InvalidModulus("greedy search requires h >= 2");
  const auto prof = modulus::profile(m);
  MatchingFamily fam;
  fam.m = m;
  fam.h = h;
  fam.target_set = prof.canonical;
  std::mt19937_64 rng(seed);
  std::vector<uint64_t> cand(h);
  for (uint64_t tries = 0; tries < budget && fam.vectors.size() < target_n; ++tries) {
    for (auto& x : cand) x = util::uniform_below(rng, m);
    // The zero vector is isotropic but its cross products are 0, outside
    // every target set; keeping it would wedge the family at one vector.
    if (std::all_of(cand.begin(), cand.end(), [](uint64_t x) { return x == 0; })) continue;
    uint64_t self = 0;
    for (uint64_t x : cand) {
      self += intfactor::mulmod_u64(x, x, m);
      if (self >= m) self -= m;
    }
    if (self != 0) continue;
    bool ok = true;
    for (const auto& kept : fam.vectors) {
      uint64_t cross = 0;
      for (size_t l = 0; l < h; ++l) {
        cross += intfactor::mulmod_u64(cand[l], kept[l], m);
        if (cross >= m) cross -= m;
      }
      if (!std::binary_search(fam.target_set.begin(), fam.target_set.end(), cross)) {
        ok = false;
        break;
      }
    }
    if (ok) fam.vectors.push_back(cand);
  }
  return fam;
}

}  // namespace ldcforge::matchfam
