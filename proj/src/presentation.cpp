#include "cdlat/presentation.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace cdlat {

void PresentationData::reset_table() { comm.assign(v_dim() * v_dim() * w_dim(), 0); }

void PresentationData::set_comm(std::size_t i, std::size_t j, std::size_t w, std::int64_t value) {
  const std::size_t d = v_dim(), e = w_dim();
  if (i >= d || j >= d || w >= e) throw DomainError("set_comm index out of range");
  if (comm.size() != d * d * e) reset_table();
  Residue v = modp::reduce(value, p);
  comm[(i * d + j) * e + w] = v;
  comm[(j * d + i) * e + w] = modp::neg(v, p);
}

static bool label_ok(const std::string& s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == '#' || c == '*' || c == '=' || c == '^' || std::isspace(static_cast<unsigned char>(c));
  });
}

std::optional<Violation> validate(const PresentationData& data) {
  if (!is_prime(data.p))
    return Violation{"modulus", 0, 0, "p = " + std::to_string(data.p) + " is not prime"};
  const std::size_t d = data.v_dim(), e = data.w_dim();
  if (data.comm.size() != d * d * e)
    return Violation{"dimension", 0, 0,
                     "commutator table has " + std::to_string(data.comm.size()) +
                         " entries, expected " + std::to_string(d * d * e)};
  std::unordered_set<std::string> seen;
  std::size_t idx = 0;
  for (const auto* labels : {&data.v_labels, &data.w_labels}) {
    for (const auto& l : *labels) {
      if (!label_ok(l)) return Violation{"label", idx, idx, "malformed label '" + l + "'"};
      if (!seen.insert(l).second) return Violation{"label", idx, idx, "duplicate label '" + l + "'"};
      ++idx;
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t w = 0; w < e; ++w) {
        Residue a = data.comm[(i * d + j) * e + w];
        if (a >= data.p)
          return Violation{"range", i, j, "entry out of range at (" + std::to_string(i) + "," +
                                              std::to_string(j) + ")"};
        if (i == j && a != 0)
          return Violation{"diagonal", i, j, "[g" + std::to_string(i) + ", g" + std::to_string(i) +
                                                 "] must be trivial"};
        Residue b = data.comm[(j * d + i) * e + w];
        if (i < j && modp::add(a, b % data.p, data.p) != 0)
          return Violation{"alternating", i, j,
                           "comm[" + std::to_string(j) + "][" + std::to_string(i) + "] != -comm[" +
                               std::to_string(i) + "][" + std::to_string(j) + "]"};
      }
    }
  }
  return std::nullopt;
}

CentralPresentation::CentralPresentation(PresentationData data) : data_(std::move(data)) {
  if (auto v = validate(data_)) throw InvalidPresentation(*v);
}

std::vector<Residue> CentralPresentation::form(std::span<const Residue> u,
                                               std::span<const Residue> v) const {
  const std::size_t d = v_dim(), e = w_dim();
  if (u.size() != d || v.size() != d) throw DomainError("form: vector length mismatch");
  std::vector<Residue> out(e, 0);
  for (std::size_t i = 0; i < d; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      if (v[j] == 0) continue;
      Residue c = modp::mul(u[i], v[j], p());
      auto cij = comm(i, j);
      for (std::size_t w = 0; w < e; ++w)
        if (cij[w]) out[w] = modp::add(out[w], modp::mul(c, cij[w], p()), p());
    }
  }
  return out;
}

std::optional<std::size_t> CentralPresentation::v_index(const std::string& label) const {
  auto it = std::find(data_.v_labels.begin(), data_.v_labels.end(), label);
  if (it == data_.v_labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - data_.v_labels.begin());
}

std::optional<std::size_t> CentralPresentation::w_index(const std::string& label) const {
  auto it = std::find(data_.w_labels.begin(), data_.w_labels.end(), label);
  if (it == data_.w_labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - data_.w_labels.begin());
}

// ---------------------------------------------------------------------------

static void check_ambient(const CentralPresentation& pres, const Subspace& u) {
  if (u.ambient_dim() != pres.v_dim())
    throw DomainError("subspace ambient dimension " + std::to_string(u.ambient_dim()) +
                      " does not match v_dim " + std::to_string(pres.v_dim()));
  if (u.modulus() != pres.p()) throw DomainError("subspace modulus mismatch");
}

FieldMatrix orthogonality_system(const CentralPresentation& pres, const Subspace& u) {
  check_ambient(pres, u);
  const std::size_t d = pres.v_dim(), e = pres.w_dim();
  const std::uint32_t p = pres.p();
  FieldMatrix sys(u.dim() * e, d, p);
  // block i, row w: v -> B(u_i, v)_w = sum_a u_i[a] comm[a][b][w] v[b]
  for (std::size_t i = 0; i < u.dim(); ++i) {
    auto ui = u.basis().row(i);
    for (std::size_t a = 0; a < d; ++a) {
      if (ui[a] == 0) continue;
      for (std::size_t b = 0; b < d; ++b) {
        auto cab = pres.comm(a, b);
        for (std::size_t w = 0; w < e; ++w) {
          if (cab[w] == 0) continue;
          std::size_t r = i * e + w;
          sys.set(r, b, modp::add(sys.at(r, b), modp::mul(ui[a], cab[w], p), p));
        }
      }
    }
  }
  return sys;
}

Subspace centralizer(const CentralPresentation& pres, const Subspace& u) {
  check_ambient(pres, u);
  if (u.dim() == 0 || pres.w_dim() == 0) return Subspace::full(pres.p(), pres.v_dim());
  return kernel(orthogonality_system(pres, u));
}

MeasureExponent measure(const CentralPresentation& pres, const Subspace& u) {
  Subspace c = centralizer(pres, u);
  return {pres.w_dim() + u.dim(), pres.w_dim() + c.dim()};
}

Subspace radical(const CentralPresentation& pres) {
  return centralizer(pres, Subspace::full(pres.p(), pres.v_dim()));
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kTableMaxDim = 12;

std::size_t xor_insert(std::uint64_t* basis, std::uint64_t x) {
  while (x) {
    int hb = 63 - std::countl_zero(x);
    if (!basis[hb]) {
      basis[hb] = x;
      return 1;
    }
    x ^= basis[hb];
  }
  return 0;
}
}  // namespace

PerpEvaluator::PerpEvaluator(const CentralPresentation& pres, bool allow_bit_packing)
    : p_(pres.p()),
      d_(pres.v_dim()),
      e_(pres.w_dim()),
      bit_packed_(allow_bit_packing && pres.p() == 2 && pres.v_dim() <= 64) {
  if (bit_packed_) {
    row_masks_.assign(d_ * e_, 0);
    for (std::size_t a = 0; a < d_; ++a)
      for (std::size_t b = 0; b < d_; ++b) {
        auto c = pres.comm(a, b);
        for (std::size_t w = 0; w < e_; ++w)
          if (c[w]) row_masks_[a * e_ + w] |= std::uint64_t{1} << b;
      }
    if (d_ <= kTableMaxDim) {
      const std::size_t n = std::size_t{1} << d_;
      table_.assign(n * d_, 0);
      std::vector<std::uint64_t> rows(e_);
      std::uint64_t basis[64];
      for (std::size_t v = 0; v < n; ++v) {
        std::fill(rows.begin(), rows.end(), 0);
        for (std::size_t a = 0; a < d_; ++a)
          if (v >> a & 1)
            for (std::size_t w = 0; w < e_; ++w) rows[w] ^= row_masks_[a * e_ + w];
        std::fill(std::begin(basis), std::end(basis), 0);
        for (auto r : rows) xor_insert(basis, r);
        std::size_t k = 0;
        for (std::size_t b = 0; b < d_; ++b)
          if (basis[b]) table_[v * d_ + k++] = basis[b];
      }
      tabled_ = true;
    }
  } else {
    functionals_.assign(d_ * e_ * d_, 0);
    for (std::size_t a = 0; a < d_; ++a)
      for (std::size_t b = 0; b < d_; ++b) {
        auto c = pres.comm(a, b);
        for (std::size_t w = 0; w < e_; ++w) functionals_[(a * e_ + w) * d_ + b] = c[w];
      }
  }
}

std::size_t PerpEvaluator::perp_dim(const FieldMatrix& basis) const {
  if (basis.cols() != d_) throw DomainError("perp_dim: ambient dimension mismatch");
  if (basis.rows() == 0 || e_ == 0) return d_;
  return bit_packed_ ? perp_dim_bits(basis) : perp_dim_generic(basis);
}

std::size_t PerpEvaluator::perp_dim_bits(const FieldMatrix& basis) const {
  std::uint64_t echelon[64] = {};
  std::size_t rank = 0;
  for (std::size_t i = 0; i < basis.rows() && rank < d_; ++i) {
    auto row = basis.row(i);
    std::uint64_t u = 0;
    for (std::size_t a = 0; a < d_; ++a)
      if (row[a]) u |= std::uint64_t{1} << a;
    if (tabled_) {
      const std::uint64_t* entry = &table_[u * d_];
      for (std::size_t k = 0; k < d_ && entry[k] && rank < d_; ++k) rank += xor_insert(echelon, entry[k]);
    } else {
      for (std::size_t w = 0; w < e_ && rank < d_; ++w) {
        std::uint64_t r = 0;
        for (std::uint64_t bits = u; bits; bits &= bits - 1)
          r ^= row_masks_[static_cast<std::size_t>(std::countr_zero(bits)) * e_ + w];
        rank += xor_insert(echelon, r);
      }
    }
  }
  return d_ - rank;
}

std::size_t PerpEvaluator::perp_dim_generic(const FieldMatrix& basis) const {
  // echelon rows kept with their pivot; each new functional is reduced against them
  thread_local std::vector<Residue> echelon;
  thread_local std::vector<std::size_t> pivot_of_row;
  thread_local std::vector<Residue> r;
  echelon.assign(d_ * d_, 0);
  pivot_of_row.clear();
  r.assign(d_, 0);
  std::vector<int> row_for_pivot(d_, -1);
  std::size_t rank = 0;
  for (std::size_t i = 0; i < basis.rows() && rank < d_; ++i) {
    auto u = basis.row(i);
    for (std::size_t w = 0; w < e_ && rank < d_; ++w) {
      std::fill(r.begin(), r.end(), 0);
      for (std::size_t a = 0; a < d_; ++a) {
        if (u[a] == 0) continue;
        const Residue* f = &functionals_[(a * e_ + w) * d_];
        for (std::size_t b = 0; b < d_; ++b)
          if (f[b]) r[b] = modp::add(r[b], modp::mul(u[a], f[b], p_), p_);
      }
      for (std::size_t c = 0; c < d_; ++c) {
        if (r[c] == 0) continue;
        int k = row_for_pivot[c];
        if (k < 0) {
          Residue s = modp::inv(r[c], p_);
          Residue* dst = &echelon[rank * d_];
          for (std::size_t b = 0; b < d_; ++b) dst[b] = modp::mul(r[b], s, p_);
          row_for_pivot[c] = static_cast<int>(rank);
          ++rank;
          break;
        }
        const Residue* src = &echelon[static_cast<std::size_t>(k) * d_];
        Residue f = r[c];
        for (std::size_t b = c; b < d_; ++b) r[b] = modp::sub(r[b], modp::mul(f, src[b], p_), p_);
      }
    }
  }
  return d_ - rank;
}

// ---------------------------------------------------------------------------

CentralPresentation direct_product(std::span<const CentralPresentation> factors) {
  if (factors.empty()) throw DomainError("direct_product needs at least one factor");
  PresentationData out;
  out.p = factors.front().p();
  for (const auto& f : factors)
    if (f.p() != out.p) throw DomainError("direct_product: modulus mismatch");
  std::vector<std::size_t> v_off, w_off;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const std::string suffix = "." + std::to_string(k + 1);
    v_off.push_back(out.v_labels.size());
    w_off.push_back(out.w_labels.size());
    for (const auto& l : factors[k].v_labels()) out.v_labels.push_back(l + suffix);
    for (const auto& l : factors[k].w_labels()) out.w_labels.push_back(l + suffix);
  }
  out.reset_table();
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const auto& f = factors[k];
    for (std::size_t i = 0; i < f.v_dim(); ++i)
      for (std::size_t j = i + 1; j < f.v_dim(); ++j) {
        auto c = f.comm(i, j);
        for (std::size_t w = 0; w < f.w_dim(); ++w)
          if (c[w]) out.set_comm(v_off[k] + i, v_off[k] + j, w_off[k] + w, c[w]);
      }
  }
  return CentralPresentation(std::move(out));
}

CentralPresentation direct_product(const CentralPresentation& g1, const CentralPresentation& g2) {
  const CentralPresentation both[] = {g1, g2};
  return direct_product(std::span<const CentralPresentation>(both));
}

CentralPresentation abelian(std::uint32_t p, std::size_t d) {
  PresentationData data;
  data.p = checked_prime(p);
  for (std::size_t i = 0; i < d; ++i) data.v_labels.push_back("g" + std::to_string(i + 1));
  data.reset_table();
  return CentralPresentation(std::move(data));
}

CentralPresentation heisenberg(std::uint32_t p) {
  PresentationData data;
  data.p = checked_prime(p);
  data.v_labels = {"x", "y"};
  data.w_labels = {"z"};
  data.reset_table();
  data.set_comm(0, 1, 0, 1);
  return CentralPresentation(std::move(data));
}

// ---------------------------------------------------------------------------
// CGP v1

namespace {

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

}  // namespace

CentralPresentation parse_cgp(const std::string& text) {
  enum class Stage { Magic, P, Noncentral, Central, Body } stage = Stage::Magic;
  PresentationData data;
  std::unordered_map<std::string, std::size_t> v_index, w_index;
  std::vector<bool> pair_seen;
  std::istringstream is(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string line = trim(raw);
    if (line.empty()) continue;
    auto tok = split_ws(line);
    switch (stage) {
      case Stage::Magic:
        if (tok.size() != 2 || tok[0] != "cgp") throw ParseError(line_no, "expected 'cgp 1' header");
        if (tok[1] != "1") throw ParseError(line_no, "unsupported cgp version " + tok[1]);
        stage = Stage::P;
        break;
      case Stage::P: {
        if (tok.size() != 2 || tok[0] != "p") throw ParseError(line_no, "expected 'p <prime>'");
        auto p = parse_int(tok[1], line_no);
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)) || p >= (std::int64_t{1} << 31))
          throw ParseError(line_no, "p = " + tok[1] + " is not a supported prime");
        data.p = static_cast<std::uint32_t>(p);
        stage = Stage::Noncentral;
        break;
      }
      case Stage::Noncentral:
        if (tok[0] != "noncentral") throw ParseError(line_no, "expected 'noncentral' line");
        data.v_labels.assign(tok.begin() + 1, tok.end());
        for (std::size_t i = 0; i < data.v_labels.size(); ++i)
          if (!v_index.emplace(data.v_labels[i], i).second)
            throw ParseError(line_no, "duplicate generator '" + data.v_labels[i] + "'");
        stage = Stage::Central;
        break;
      case Stage::Central:
        if (tok[0] != "central") throw ParseError(line_no, "expected 'central' line");
        data.w_labels.assign(tok.begin() + 1, tok.end());
        for (std::size_t i = 0; i < data.w_labels.size(); ++i)
          if (v_index.count(data.w_labels[i]) || !w_index.emplace(data.w_labels[i], i).second)
            throw ParseError(line_no, "duplicate generator '" + data.w_labels[i] + "'");
        data.reset_table();
        pair_seen.assign(data.v_dim() * data.v_dim(), false);
        stage = Stage::Body;
        break;
      case Stage::Body: {
        if (tok[0] != "comm") throw ParseError(line_no, "unexpected directive '" + tok[0] + "'");
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "comm line lacks '='");
        auto lhs = split_ws(line.substr(0, eq));
        if (lhs.size() != 3) throw ParseError(line_no, "expected 'comm <gi> <gj> = ...'");
        auto gi = v_index.find(lhs[1]);
        auto gj = v_index.find(lhs[2]);
        if (gi == v_index.end()) throw ParseError(line_no, "unknown noncentral generator '" + lhs[1] + "'");
        if (gj == v_index.end()) throw ParseError(line_no, "unknown noncentral generator '" + lhs[2] + "'");
        std::size_t i = gi->second, j = gj->second;
        if (i >= j)
          throw ParseError(line_no, "'" + lhs[1] + "' must be listed before '" + lhs[2] + "' in noncentral");
        if (pair_seen[i * data.v_dim() + j])
          throw ParseError(line_no, "duplicate comm line for " + lhs[1] + ", " + lhs[2]);
        pair_seen[i * data.v_dim() + j] = true;
        std::string rhs = line.substr(eq + 1);
        std::vector<std::int64_t> coeff(data.w_dim(), 0);
        std::size_t start = 0;
        bool any = false;
        while (start <= rhs.size()) {
          auto star = rhs.find('*', start);
          std::string term = trim(rhs.substr(start, star == std::string::npos ? std::string::npos : star - start));
          if (term.empty()) throw ParseError(line_no, "empty factor in comm line");
          std::string name = term;
          std::int64_t exp = 1;
          if (auto caret = term.find('^'); caret != std::string::npos) {
            name = trim(term.substr(0, caret));
            exp = parse_int(trim(term.substr(caret + 1)), line_no);
          }
          auto wz = w_index.find(name);
          if (wz == w_index.end()) throw ParseError(line_no, "unknown central generator '" + name + "'");
          coeff[wz->second] += exp;
          any = true;
          if (star == std::string::npos) break;
          start = star + 1;
        }
        if (!any) throw ParseError(line_no, "comm line has no factors");
        for (std::size_t w = 0; w < data.w_dim(); ++w)
          if (coeff[w] % static_cast<std::int64_t>(data.p) != 0) data.set_comm(i, j, w, coeff[w]);
        break;
      }
    }
  }
  if (stage != Stage::Body) throw ParseError(line_no, "incomplete cgp document");
  return CentralPresentation(std::move(data));
}

std::string serialize_cgp(const CentralPresentation& pres) {
  std::ostringstream os;
  os << "cgp 1\n";
  os << "p " << pres.p() << "\n";
  os << "noncentral";
  for (const auto& l : pres.v_labels()) os << ' ' << l;
  os << "\ncentral";
  for (const auto& l : pres.w_labels()) os << ' ' << l;
  os << '\n';
  for (std::size_t i = 0; i < pres.v_dim(); ++i)
    for (std::size_t j = i + 1; j < pres.v_dim(); ++j) {
      auto c = pres.comm(i, j);
      if (std::all_of(c.begin(), c.end(), [](Residue x) { return x == 0; })) continue;
      os << "comm " << pres.v_labels()[i] << ' ' << pres.v_labels()[j] << " =";
      bool first = true;
      for (std::size_t w = 0; w < pres.w_dim(); ++w) {
        if (c[w] == 0) continue;
        os << (first ? " " : " * ") << pres.w_labels()[w];
        if (c[w] != 1) os << '^' << c[w];
        first = false;
      }
      os << '\n';
    }
  return os.str();
}

}  // namespace cdlat
