#include "cdlat/cdengine.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <cstring>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace cdlat {

std::string to_string(LatticeMode mode) {
  switch (mode) {
    case LatticeMode::Full: return "full";
    case LatticeMode::VerifiedPredicted: return "verified-predicted";
    case LatticeMode::Predicted: return "predicted";
  }
  return "?";
}

std::optional<std::size_t> CDLattice::index_of(const Subspace& s) const {
  for (std::size_t i = 0; i < members.size(); ++i)
    if (members[i] == s) return i;
  return std::nullopt;
}

Poset CDLattice::poset() const {
  Poset out;
  out.size = members.size();
  out.covers = covers;
  for (const auto& s : members) out.rank.push_back(static_cast<int>(s.dim()));
  return out;
}

std::size_t jobs_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("CDLAT_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

namespace {

std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return jobs;
}

// Runs work(i) for i in [0, count) on `jobs` threads, handing out indices in order.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& work) {
  jobs = std::min(resolve_jobs(jobs), std::max<std::size_t>(count, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) work(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = count;
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

using SubspaceSet = std::unordered_set<Subspace, SubspaceHash>;

struct Fault {
  Subspace space;
  std::string message;
};

std::string describe(std::size_t i, const Subspace& s) {
  return "member " + std::to_string(i) + " (dim " + std::to_string(s.dim()) + ")";
}

std::optional<Fault> find_fault(const CentralPresentation& pres, const std::vector<Subspace>& members) {
  std::unordered_map<Subspace, std::size_t, SubspaceHash> index;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].ambient_dim() != pres.v_dim()) throw DomainError("member dimension mismatch");
    index.emplace(members[i], i);
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto c = centralizer(pres, members[i]);
    if (!index.count(c)) return Fault{members[i], "centralizer of " + describe(i, members[i]) + " is not a member"};
    if (centralizer(pres, c) != members[i])
      return Fault{members[i], "C(C(U)) differs from U for " + describe(i, members[i])};
  }
  const std::size_t n = members.size();
  std::vector<std::size_t> join(n * n), meet(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      auto s = subspace_sum(members[i], members[j]);
      auto it = index.find(s);
      if (it == index.end())
        return Fault{s, "sum of " + describe(i, members[i]) + " and " + describe(j, members[j]) + " is not a member"};
      join[i * n + j] = join[j * n + i] = it->second;
      auto t = subspace_intersect(members[i], members[j]);
      it = index.find(t);
      if (it == index.end())
        return Fault{t, "intersection of " + describe(i, members[i]) + " and " + describe(j, members[j]) +
                            " is not a member"};
      meet[i * n + j] = meet[j * n + i] = it->second;
    }
  // modular law: u <= w implies u + (v ∩ w) = (u + v) ∩ w
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t w = 0; w < n; ++w) {
      if (join[u * n + w] != w) continue;
      for (std::size_t v = 0; v < n; ++v)
        if (join[u * n + meet[v * n + w]] != meet[join[u * n + v] * n + w])
          return Fault{members[v], "modular law fails for members " + std::to_string(u) + ", " + std::to_string(v) +
                                       ", " + std::to_string(w)};
    }
  return std::nullopt;
}

}  // namespace

std::pair<CDLattice, SearchStats> compute_cd_full(const CentralPresentation& pres, const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint32_t p = pres.p();
  const std::size_t d = pres.v_dim();
  const BigCount total = subspace_count(d, p);
  if (total > options.budget)
    throw BudgetExceeded("full search needs " + total.str() + " subspaces, above the budget of " +
                         options.budget.str() + "; use verify mode or raise the budget");

  const auto patterns = pivot_patterns(d);
  const PerpEvaluator eval(pres);
  const std::size_t jobs = resolve_jobs(options.jobs);

  // pass 1: maximum measure, per-pattern
  std::vector<std::size_t> pattern_max(patterns.size(), 0);
  std::vector<std::uint64_t> pattern_count(patterns.size(), 0);
  parallel_for(patterns.size(), jobs, [&](std::size_t k) {
    std::size_t best = 0;
    std::uint64_t count = 0;
    for_each_in_pattern(p, d, patterns[k], [&](const FieldMatrix& m) {
      best = std::max(best, eval.measure_value(m));
      ++count;
      return true;
    });
    pattern_max[k] = best;
    pattern_count[k] = count;
  });
  const std::size_t s = *std::max_element(pattern_max.begin(), pattern_max.end());

  // pass 2: members
  std::vector<std::vector<Subspace>> found(patterns.size());
  parallel_for(patterns.size(), jobs, [&](std::size_t k) {
    if (pattern_max[k] != s) return;
    for_each_in_pattern(p, d, patterns[k], [&](const FieldMatrix& m) {
      if (eval.measure_value(m) == s) found[k].push_back(Subspace::from_canonical(m, patterns[k].cols));
      return true;
    });
  });

  CDLattice lattice;
  lattice.p = p;
  lattice.d = d;
  lattice.e = pres.w_dim();
  lattice.mode = LatticeMode::Full;
  lattice.max_measure = s;
  for (auto& chunk : found)
    for (auto& m : chunk) lattice.members.push_back(std::move(m));
  std::sort(lattice.members.begin(), lattice.members.end());
  lattice.names.assign(lattice.members.size(), "");
  lattice.covers = covers(lattice.members);

  SearchStats stats;
  stats.per_dimension.assign(d + 1, 0);
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    stats.per_dimension[patterns[k].dim()] += pattern_count[k];
    stats.scanned += pattern_count[k];
  }
  stats.partitions = patterns.size();
  stats.jobs = jobs;
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(lattice), std::move(stats)};
}

std::vector<std::pair<std::size_t, std::size_t>> covers(const std::vector<Subspace>& members) {
  return member_poset(members).covers;
}

std::optional<std::string> check_duality(const CentralPresentation& pres, const std::vector<Subspace>& members) {
  if (auto f = find_fault(pres, members)) return f->message;
  return std::nullopt;
}

bool minimum_is_center(const CDLattice& lattice) {
  if (lattice.members.empty()) throw DomainError("empty lattice");
  return std::any_of(lattice.members.begin(), lattice.members.end(), [](const Subspace& s) { return s.dim() == 0; });
}

// ---------------------------------------------------------------------------

namespace {

class Judge {
 public:
  Judge(const CentralPresentation& pres, const std::vector<Subspace>& members, std::size_t s)
      : eval_(pres), members_(members.begin(), members.end()), s_(s) {}

  std::optional<Counterexample> check(const FieldMatrix& basis, const std::vector<std::size_t>* pivots) const {
    std::size_t v = eval_.measure_value(basis);
    if (v < s_) return std::nullopt;
    Subspace space = pivots ? Subspace::from_canonical(basis, *pivots) : Subspace::span(basis);
    if (v > s_) return Counterexample{space, v, "exceeds", "measure exceeds the predicted maximum"};
    if (!members_.count(space))
      return Counterexample{space, v, "missing member", "attains the maximum but is not predicted"};
    return std::nullopt;
  }
  std::optional<Counterexample> check(const Subspace& s) const { return check(s.basis(), &s.pivot_cols()); }

 private:
  PerpEvaluator eval_;
  SubspaceSet members_;
  std::size_t s_;
};

Subspace combine(const Subspace& u, const Subspace& coeffs) {
  // rows of coeffs (over GF(p)^dim u) applied to the basis of u
  const std::uint32_t p = u.modulus();
  FieldMatrix m(coeffs.dim(), u.ambient_dim(), p);
  for (std::size_t r = 0; r < coeffs.dim(); ++r)
    for (std::size_t i = 0; i < u.dim(); ++i) {
      Residue c = coeffs.basis().at(r, i);
      if (!c) continue;
      for (std::size_t j = 0; j < u.ambient_dim(); ++j)
        m.set(r, j, modp::add(m.at(r, j), modp::mul(c, u.basis().at(i, j), p), p));
    }
  return Subspace::span(m);
}

std::optional<Counterexample> adversarial(const Judge& judge, const Subspace& u, std::uint64_t& checked) {
  const std::uint32_t p = u.modulus();
  const std::size_t k = u.dim(), d = u.ambient_dim();
  std::optional<Counterexample> hit;
  // codimension-1 subspaces: kernels of nonzero functionals on U
  if (k >= 1)
    for (const auto& pat : pivot_patterns(k, 1)) {
      for_each_in_pattern(p, k, pat, [&](const FieldMatrix& f) {
        ++checked;
        hit = judge.check(combine(u, kernel(f)));
        return !hit;
      });
      if (hit) return hit;
    }
  // one-step extensions: U + <w> for lines w in the complement spanned by non-pivot coordinates
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0, i = 0; c < d; ++c) {
    if (i < k && u.pivot_cols()[i] == c) ++i;
    else free_cols.push_back(c);
  }
  if (!free_cols.empty())
    for (const auto& pat : pivot_patterns(free_cols.size(), 1)) {
      for_each_in_pattern(p, free_cols.size(), pat, [&](const FieldMatrix& w) {
        FieldMatrix m = u.basis();
        std::vector<Residue> row(d, 0);
        for (std::size_t j = 0; j < free_cols.size(); ++j) row[free_cols[j]] = w.at(0, j);
        m.append_row(row);
        ++checked;
        hit = judge.check(Subspace::span(m));
        return !hit;
      });
      if (hit) return hit;
    }
  return std::nullopt;
}

Subspace random_subspace(std::mt19937_64& rng, std::uint32_t p, std::size_t d) {
  std::uniform_int_distribution<std::size_t> dim_dist(0, d);
  std::uniform_int_distribution<Residue> entry(0, p - 1);
  const std::size_t k = dim_dist(rng);
  while (true) {
    FieldMatrix m(k, d, p);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < d; ++c) m.set(r, c, entry(rng));
    auto s = Subspace::span(m);
    if (s.dim() == k) return s;
  }
}

constexpr std::size_t kSampleChunks = 64;

}  // namespace

VerifyReport verify_predicted(const CentralPresentation& pres, const std::vector<Subspace>& predicted_in,
                              const VerifyOptions& options) {
  if (predicted_in.empty()) throw DomainError("predicted lattice is empty");
  std::vector<Subspace> predicted = predicted_in;
  std::sort(predicted.begin(), predicted.end());
  predicted.erase(std::unique(predicted.begin(), predicted.end()), predicted.end());

  VerifyReport report;
  report.measure = measure(pres, predicted.front()).value();
  for (const auto& u : predicted) {
    if (u.ambient_dim() != pres.v_dim()) throw DomainError("predicted member dimension mismatch");
    auto v = measure(pres, u).value();
    if (v != report.measure) {
      report.counterexample = Counterexample{u, v, "measure", "predicted members do not share one measure"};
      return report;
    }
  }
  if (auto f = find_fault(pres, predicted)) {
    report.counterexample = Counterexample{f->space, measure(pres, f->space).value(), "closure", f->message};
    return report;
  }

  const Judge judge(pres, predicted, report.measure);
  for (const auto& u : predicted)
    if ((report.counterexample = adversarial(judge, u, report.adversarial_checked))) return report;

  const std::uint32_t p = pres.p();
  const std::size_t d = pres.v_dim();
  const std::size_t jobs = resolve_jobs(options.jobs);
  if (subspace_count(d, p) <= options.samples) {
    report.exhaustive = true;
    const auto patterns = pivot_patterns(d);
    std::vector<std::optional<Counterexample>> hits(patterns.size());
    std::vector<std::uint64_t> counts(patterns.size(), 0);
    parallel_for(patterns.size(), jobs, [&](std::size_t k) {
      for_each_in_pattern(p, d, patterns[k], [&](const FieldMatrix& m) {
        ++counts[k];
        hits[k] = judge.check(m, &patterns[k].cols);
        return !hits[k];
      });
    });
    for (auto c : counts) report.random_checked += c;
    for (auto& h : hits)
      if (h) {
        report.counterexample = std::move(h);
        return report;
      }
  } else {
    std::vector<std::optional<Counterexample>> hits(kSampleChunks);
    std::vector<std::uint64_t> counts(kSampleChunks, 0);
    parallel_for(kSampleChunks, jobs, [&](std::size_t c) {
      std::uint64_t quota = options.samples / kSampleChunks + (c < options.samples % kSampleChunks ? 1 : 0);
      std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(c)));
      for (std::uint64_t i = 0; i < quota; ++i) {
        ++counts[c];
        if ((hits[c] = judge.check(random_subspace(rng, p, d)))) return;
      }
    });
    for (auto c : counts) report.random_checked += c;
    for (auto& h : hits)
      if (h) {
        report.counterexample = std::move(h);
        return report;
      }
  }
  report.pass = true;
  return report;
}

VerifyReport verify_predicted(const CentralPresentation& pres, const ExpectedLattice& predicted,
                              const VerifyOptions& options) {
  std::vector<Subspace> spaces;
  for (const auto& m : predicted.members) spaces.push_back(m.space);
  return verify_predicted(pres, spaces, options);
}

CDLattice predicted_lattice(const CentralPresentation& pres, const ExpectedLattice& expected) {
  if (expected.members.empty()) throw DomainError("predicted lattice is empty");
  CDLattice lattice;
  lattice.p = pres.p();
  lattice.d = pres.v_dim();
  lattice.e = pres.w_dim();
  lattice.mode = LatticeMode::Predicted;
  for (const auto& m : expected.members) lattice.members.push_back(m.space);
  std::sort(lattice.members.begin(), lattice.members.end());
  lattice.max_measure = measure(pres, lattice.members.front()).value();
  lattice.names.assign(lattice.members.size(), "");
  lattice.covers = covers(lattice.members);
  lattice.expect = expected.expected_shape.summary();
  bind_names(lattice, expected);
  return lattice;
}

void bind_names(CDLattice& lattice, const ExpectedLattice& expected) {
  lattice.names.resize(lattice.members.size());
  for (const auto& m : expected.members)
    if (auto i = lattice.index_of(m.space)) lattice.names[*i] = m.name;
}

// ---------------------------------------------------------------------------

namespace {

constexpr char kDigits[] = "0123456789abcdefghijklmnopqrstuvwxyz";

std::vector<std::string> words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

std::uint64_t parse_count(const std::string& s, std::size_t line) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw ParseError(line, "expected a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw ParseError(line, "integer out of range: " + s);
  }
}

}  // namespace

std::string write_cdl(const CDLattice& lattice) {
  if (lattice.p > 36) throw DomainError("cdl v1 stores digits 0-9a-z, so p <= 36");
  std::ostringstream os;
  os << "cdl 1\n"
     << "p " << lattice.p << "\n"
     << "d " << lattice.d << "\n"
     << "e " << lattice.e << "\n"
     << "mode " << to_string(lattice.mode) << "\n"
     << "max " << lattice.max_measure << "\n";
  for (const auto& s : lattice.members) {
    os << "member " << s.dim();
    for (std::size_t r = 0; r < s.dim(); ++r) {
      os << ' ';
      for (auto x : s.basis().row(r)) os << kDigits[x];
    }
    os << "\n";
  }
  for (auto [hi, lo] : lattice.covers) os << "cover " << hi << ' ' << lo << "\n";
  for (std::size_t i = 0; i < lattice.names.size(); ++i)
    if (!lattice.names[i].empty()) os << "name " << i << ' ' << lattice.names[i] << "\n";
  if (!lattice.expect.empty()) os << "expect " << lattice.expect << "\n";
  return os.str();
}

CDLattice parse_cdl(const std::string& text) {
  CDLattice lattice;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool seen_magic = false;
  std::optional<std::uint64_t> p, d, e, max;
  std::optional<LatticeMode> mode;
  std::vector<std::pair<std::size_t, std::string>> names;
  auto header_done = [&] { return p && d && e && mode && max; };
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
    auto w = words(body);
    if (w.empty()) continue;
    if (!seen_magic) {
      if (w.size() != 2 || w[0] != "cdl") throw ParseError(line_no, "expected 'cdl 1' header");
      if (w[1] != "1") throw ParseError(line_no, "unsupported cdl version " + w[1]);
      seen_magic = true;
      continue;
    }
    const auto& key = w[0];
    auto need = [&](std::size_t n) {
      if (w.size() != n) throw ParseError(line_no, "'" + key + "' takes " + std::to_string(n - 1) + " field(s)");
    };
    if (key == "p" || key == "d" || key == "e" || key == "max") {
      need(2);
      auto& slot = key == "p" ? p : key == "d" ? d : key == "e" ? e : max;
      if (slot) throw ParseError(line_no, "duplicate '" + key + "'");
      slot = parse_count(w[1], line_no);
      if (key == "p") {
        if (!is_prime(*p) || *p > 36) throw ParseError(line_no, "p must be a prime <= 36");
      }
    } else if (key == "mode") {
      need(2);
      if (w[1] == "full") mode = LatticeMode::Full;
      else if (w[1] == "verified-predicted") mode = LatticeMode::VerifiedPredicted;
      else if (w[1] == "predicted") mode = LatticeMode::Predicted;
      else throw ParseError(line_no, "unknown mode " + w[1]);
    } else if (key == "member") {
      if (!header_done()) throw ParseError(line_no, "member before complete header");
      if (w.size() < 2) throw ParseError(line_no, "member needs a dimension");
      auto k = parse_count(w[1], line_no);
      if (w.size() != k + 2) throw ParseError(line_no, "member row count does not match its dimension");
      FieldMatrix m(0, *d, static_cast<std::uint32_t>(*p));
      std::vector<Residue> row(*d);
      for (std::size_t r = 0; r < k; ++r) {
        const auto& digits = w[r + 2];
        if (digits.size() != *d) throw ParseError(line_no, "row length differs from d");
        for (std::size_t c = 0; c < *d; ++c) {
          const char* pos = std::strchr(kDigits, digits[c]);
          if (!digits[c] || !pos || static_cast<std::uint64_t>(pos - kDigits) >= *p)
            throw ParseError(line_no, std::string("bad digit '") + digits[c] + "'");
          row[c] = static_cast<Residue>(pos - kDigits);
        }
        m.append_row(row);
      }
      auto s = Subspace::span(m);
      if (s.dim() != k || !(s.basis() == m)) throw ParseError(line_no, "member basis is not in reduced row echelon form");
      if (lattice.index_of(s)) throw ParseError(line_no, "duplicate member");
      lattice.members.push_back(std::move(s));
    } else if (key == "cover") {
      need(3);
      lattice.covers.emplace_back(parse_count(w[1], line_no), parse_count(w[2], line_no));
      auto [hi, lo] = lattice.covers.back();
      if (hi >= lattice.members.size() || lo >= lattice.members.size())
        throw ParseError(line_no, "cover refers to an unknown member");
    } else if (key == "name") {
      need(3);
      auto i = parse_count(w[1], line_no);
      if (i >= lattice.members.size()) throw ParseError(line_no, "name refers to an unknown member");
      names.emplace_back(i, w[2]);
    } else if (key == "expect") {
      auto pos = body.find("expect");
      auto rest = body.substr(pos + 6);
      auto first = rest.find_first_not_of(" \t");
      auto last = rest.find_last_not_of(" \t\r");
      lattice.expect = first == std::string::npos ? "" : rest.substr(first, last - first + 1);
    } else {
      throw ParseError(line_no, "unknown keyword '" + key + "'");
    }
  }
  if (!seen_magic) throw ParseError(line_no, "empty document");
  if (!header_done()) throw ParseError(line_no, "incomplete header (need p, d, e, mode, max)");
  if (lattice.members.empty()) throw ParseError(line_no, "lattice has no members");
  lattice.p = static_cast<std::uint32_t>(*p);
  lattice.d = *d;
  lattice.e = *e;
  lattice.mode = *mode;
  lattice.max_measure = *max;
  lattice.names.assign(lattice.members.size(), "");
  for (auto& [i, n] : names) lattice.names[i] = std::move(n);
  return lattice;
}

}  // namespace cdlat
