#include "cdlat/gfplin.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace cdlat {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t f = 2; f * f <= n; ++f)
    if (n % f == 0) return false;
  return true;
}

std::uint32_t checked_prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 31))
    throw DomainError("modulus " + std::to_string(p) + " is too large");
  if (!is_prime(p)) throw DomainError("modulus " + std::to_string(p) + " is not prime");
  return static_cast<std::uint32_t>(p);
}

namespace modp {

Residue inv(Residue a, std::uint32_t p) {
  if (a % p == 0) throw DomainError("zero has no inverse");
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  return reduce(t, p);
}

Residue reduce(std::int64_t a, std::uint32_t p) {
  std::int64_t r = a % static_cast<std::int64_t>(p);
  return static_cast<Residue>(r < 0 ? r + p : r);
}

}  // namespace modp

// ---------------------------------------------------------------------------

FieldScalar::FieldScalar(std::int64_t value, std::uint32_t p)
    : value_(modp::reduce(value, checked_prime(p))), p_(p) {}

void FieldScalar::check_same(FieldScalar o) const {
  if (o.p_ != p_) throw DomainError("modulus mismatch");
}

FieldScalar FieldScalar::operator+(FieldScalar o) const {
  check_same(o);
  return {Raw{}, modp::add(value_, o.value_, p_), p_};
}
FieldScalar FieldScalar::operator-(FieldScalar o) const {
  check_same(o);
  return {Raw{}, modp::sub(value_, o.value_, p_), p_};
}
FieldScalar FieldScalar::operator*(FieldScalar o) const {
  check_same(o);
  return {Raw{}, modp::mul(value_, o.value_, p_), p_};
}
FieldScalar FieldScalar::operator-() const { return {Raw{}, modp::neg(value_, p_), p_}; }
FieldScalar FieldScalar::inverse() const { return {Raw{}, modp::inv(value_, p_), p_}; }

// ---------------------------------------------------------------------------

FieldMatrix::FieldMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
    : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

FieldMatrix::FieldMatrix(std::uint32_t p, std::size_t cols,
                         const std::vector<std::vector<std::int64_t>>& rows)
    : rows_(rows.size()), cols_(cols), p_(p), data_() {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DomainError("ragged matrix row");
    for (auto v : r) data_.push_back(modp::reduce(v, p_));
  }
}

void FieldMatrix::append_row(std::span<const Residue> values) {
  if (values.size() != cols_) throw DomainError("row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

void FieldMatrix::truncate_rows(std::size_t n) {
  if (n < rows_) {
    rows_ = n;
    data_.resize(rows_ * cols_);
  }
}

std::vector<std::size_t> rref_in_place(FieldMatrix& m) {
  const std::uint32_t p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = r;
    while (sel < m.rows() && m.at(sel, c) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != r) std::swap_ranges(m.row(sel).begin(), m.row(sel).end(), m.row(r).begin());
    auto pivot_row = m.row(r);
    if (Residue lead = pivot_row[c]; lead != 1) {
      Residue f = modp::inv(lead, p);
      for (auto& x : pivot_row) x = modp::mul(x, f, p);
    }
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      auto row = m.row(i);
      Residue f = row[c];
      if (f == 0) continue;
      for (std::size_t j = c; j < m.cols(); ++j)
        row[j] = modp::sub(row[j], modp::mul(f, pivot_row[j], p), p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

RrefResult rref(const FieldMatrix& m) {
  FieldMatrix reduced = m;
  auto pivots = rref_in_place(reduced);
  std::size_t rank = pivots.size();
  return {std::move(reduced), rank, std::move(pivots)};
}

// ---------------------------------------------------------------------------

Subspace Subspace::zero(std::uint32_t p, std::size_t d) {
  return Subspace(FieldMatrix(0, d, checked_prime(p)), {});
}

Subspace Subspace::full(std::uint32_t p, std::size_t d) {
  FieldMatrix id(d, d, checked_prime(p));
  std::vector<std::size_t> pivots(d);
  for (std::size_t i = 0; i < d; ++i) {
    id.set(i, i, 1);
    pivots[i] = i;
  }
  return Subspace(std::move(id), std::move(pivots));
}

Subspace Subspace::span(const FieldMatrix& generators) {
  FieldMatrix m = generators;
  auto pivots = rref_in_place(m);
  m.truncate_rows(pivots.size());
  return Subspace(std::move(m), std::move(pivots));
}

Subspace Subspace::span(std::uint32_t p, std::size_t d,
                        const std::vector<std::vector<std::int64_t>>& vectors) {
  return span(FieldMatrix(checked_prime(p), d, vectors));
}

Subspace Subspace::from_canonical(FieldMatrix basis, std::vector<std::size_t> pivots) {
  return Subspace(std::move(basis), std::move(pivots));
}

bool Subspace::contains_vector(std::span<const Residue> v) const {
  if (v.size() != ambient_dim()) throw DomainError("vector length mismatch");
  const std::uint32_t p = modulus();
  std::vector<Residue> w(v.begin(), v.end());
  // Reducing against an RREF basis: subtract w[pivot] times each basis row.
  for (std::size_t i = 0; i < dim(); ++i) {
    Residue f = w[pivots_[i]];
    if (f == 0) continue;
    auto row = basis_.row(i);
    for (std::size_t j = pivots_[i]; j < w.size(); ++j)
      w[j] = modp::sub(w[j], modp::mul(f, row[j], p), p);
  }
  return std::all_of(w.begin(), w.end(), [](Residue x) { return x == 0; });
}

static void check_compatible(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim())
    throw DomainError("ambient dimension mismatch: " + std::to_string(u.ambient_dim()) +
                      " vs " + std::to_string(v.ambient_dim()));
  if (u.modulus() != v.modulus()) throw DomainError("modulus mismatch");
}

bool Subspace::contains(const Subspace& other) const {
  check_compatible(*this, other);
  if (other.dim() > dim()) return false;
  for (std::size_t i = 0; i < other.dim(); ++i)
    if (!contains_vector(other.basis_.row(i))) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return modulus() == o.modulus() && basis_.cols() == o.basis_.cols() && basis_ == o.basis_;
}

std::strong_ordering Subspace::operator<=>(const Subspace& o) const {
  if (auto c = ambient_dim() <=> o.ambient_dim(); c != 0) return c;
  if (auto c = dim() <=> o.dim(); c != 0) return c;
  auto a = canonical_entries();
  auto b = o.canonical_entries();
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t Subspace::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ ambient_dim();
  for (Residue x : basis_.data()) {
    h ^= x + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ dim());
}

std::string Subspace::to_string() const {
  std::ostringstream os;
  os << "span{";
  for (std::size_t i = 0; i < dim(); ++i) {
    if (i) os << ", ";
    os << '(';
    auto row = basis_.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << row[j];
    os << ')';
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------

Subspace kernel(const FieldMatrix& m) {
  const std::uint32_t p = m.modulus();
  FieldMatrix r = m;
  auto pivots = rref_in_place(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  FieldMatrix basis(0, m.cols(), p);
  std::vector<Residue> v(m.cols());
  // One kernel vector per free column f: x_f = 1, x_pivot(i) = -r[i][f].
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = modp::neg(r.at(i, f), p);
    basis.append_row(v);
  }
  return Subspace::span(basis);
}

Subspace subspace_sum(const Subspace& u, const Subspace& v) {
  check_compatible(u, v);
  FieldMatrix m = u.basis();
  for (std::size_t i = 0; i < v.dim(); ++i) m.append_row(v.basis().row(i));
  return Subspace::span(m);
}

Subspace annihilator(const Subspace& u) {
  if (u.dim() == 0) return Subspace::full(u.modulus(), u.ambient_dim());
  return kernel(u.basis());
}

Subspace subspace_intersect(const Subspace& u, const Subspace& v) {
  check_compatible(u, v);
  // U ∩ V = (ann U + ann V)^0
  Subspace constraints = subspace_sum(annihilator(u), annihilator(v));
  return annihilator(constraints);
}

bool contains(const Subspace& u, const Subspace& v) { return u.contains(v); }

Subspace direct_sum(const Subspace& u, const Subspace& v) {
  if (u.modulus() != v.modulus()) throw DomainError("modulus mismatch");
  const std::size_t du = u.ambient_dim(), dv = v.ambient_dim();
  FieldMatrix m(0, du + dv, u.modulus());
  std::vector<Residue> row(du + dv);
  for (std::size_t i = 0; i < u.dim(); ++i) {
    std::fill(row.begin(), row.end(), 0);
    std::copy_n(u.basis().row(i).begin(), du, row.begin());
    m.append_row(row);
  }
  for (std::size_t i = 0; i < v.dim(); ++i) {
    std::fill(row.begin(), row.end(), 0);
    std::copy_n(v.basis().row(i).begin(), dv, row.begin() + static_cast<std::ptrdiff_t>(du));
    m.append_row(row);
  }
  return Subspace::span(m);
}

Subspace embed(const Subspace& u, std::size_t n, std::span<const std::size_t> positions) {
  if (positions.size() != u.ambient_dim()) throw DomainError("embedding arity mismatch");
  FieldMatrix m(0, n, u.modulus());
  std::vector<Residue> row(n);
  for (std::size_t i = 0; i < u.dim(); ++i) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t j = 0; j < positions.size(); ++j) {
      if (positions[j] >= n) throw DomainError("embedding position out of range");
      row[positions[j]] = u.basis().at(i, j);
    }
    m.append_row(row);
  }
  return Subspace::span(m);
}

// ---------------------------------------------------------------------------

BigCount gaussian_binomial(std::size_t d, std::size_t k, std::uint32_t p) {
  if (k > d) throw DomainError("gaussian_binomial: k > d");
  checked_prime(p);
  BigCount num = 1, den = 1;
  BigCount q = p;
  for (std::size_t i = 0; i < k; ++i) {
    num *= boost::multiprecision::pow(q, static_cast<unsigned>(d - i)) - 1;
    den *= boost::multiprecision::pow(q, static_cast<unsigned>(i + 1)) - 1;
  }
  return num / den;
}

BigCount subspace_count(std::size_t d, std::uint32_t p) {
  BigCount total = 0;
  for (std::size_t k = 0; k <= d; ++k) total += gaussian_binomial(d, k, p);
  return total;
}

std::size_t PivotPattern::free_entries(std::size_t d) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < cols.size(); ++i)
    total += (d - cols[i] - 1) - (cols.size() - i - 1);
  return total;
}

std::vector<PivotPattern> pivot_patterns(std::size_t d, std::optional<std::size_t> dim_filter) {
  std::vector<PivotPattern> out;
  for (std::size_t k = 0; k <= d; ++k) {
    if (dim_filter && *dim_filter != k) continue;
    // k-subsets of {0..d-1} in lexicographic order
    std::vector<std::size_t> c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = i;
    while (true) {
      out.push_back({c});
      std::size_t i = k;
      while (i > 0 && c[i - 1] == d - k + i - 1) --i;
      if (i == 0) break;
      ++c[i - 1];
      for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

static std::vector<std::pair<std::size_t, std::size_t>> free_positions(std::size_t d,
                                                                       const PivotPattern& pat) {
  std::vector<bool> is_pivot(d, false);
  for (auto c : pat.cols) is_pivot[c] = true;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < pat.cols.size(); ++i)
    for (std::size_t c = pat.cols[i] + 1; c < d; ++c)
      if (!is_pivot[c]) out.emplace_back(i, c);
  return out;
}

static FieldMatrix pattern_skeleton(std::uint32_t p, std::size_t d, const PivotPattern& pat) {
  FieldMatrix m(pat.dim(), d, p);
  for (std::size_t i = 0; i < pat.dim(); ++i) m.set(i, pat.cols[i], 1);
  return m;
}

void for_each_in_pattern(std::uint32_t p, std::size_t d, const PivotPattern& pattern,
                         const std::function<bool(const FieldMatrix&)>& visit) {
  checked_prime(p);
  FieldMatrix m = pattern_skeleton(p, d, pattern);
  const auto free = free_positions(d, pattern);
  std::vector<Residue> counter(free.size(), 0);
  while (true) {
    if (!visit(m)) return;
    // odometer: last free entry varies fastest
    std::size_t i = free.size();
    while (i > 0) {
      --i;
      auto [r, c] = free[i];
      if (++counter[i] < p) {
        m.set(r, c, counter[i]);
        break;
      }
      counter[i] = 0;
      m.set(r, c, 0);
      if (i == 0) return;
    }
    if (free.empty()) return;
  }
}

SubspaceStream::SubspaceStream(std::uint32_t p, std::size_t d, std::optional<std::size_t> dim_filter)
    : p_(checked_prime(p)), d_(d), patterns_(pivot_patterns(d, dim_filter)) {
  done_ = patterns_.empty() || !load_pattern();
}

bool SubspaceStream::load_pattern() {
  if (pattern_index_ >= patterns_.size()) return false;
  free_pos_ = free_positions(d_, patterns_[pattern_index_]);
  counter_.assign(free_pos_.size(), 0);
  fresh_ = true;
  return true;
}

std::optional<Subspace> SubspaceStream::next() {
  if (done_) return std::nullopt;
  if (!fresh_) {
    std::size_t i = counter_.size();
    bool advanced = false;
    while (i > 0) {
      --i;
      if (++counter_[i] < p_) {
        advanced = true;
        break;
      }
      counter_[i] = 0;
    }
    if (!advanced) {
      ++pattern_index_;
      if (!load_pattern()) {
        done_ = true;
        return std::nullopt;
      }
    }
  }
  fresh_ = false;
  const auto& pat = patterns_[pattern_index_];
  FieldMatrix m = pattern_skeleton(p_, d_, pat);
  for (std::size_t i = 0; i < free_pos_.size(); ++i)
    m.set(free_pos_[i].first, free_pos_[i].second, counter_[i]);
  return Subspace::from_canonical(std::move(m), pat.cols);
}

}  // namespace cdlat
