#include "cqcode/typeclasses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>

namespace cqcode {

namespace {

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

double entropy_of_counts(const std::vector<int>& counts, int total) {
  double h = 0.0;
  for (int c : counts) h -= xlogx(static_cast<double>(c) / total);
  return h;
}

}  // namespace

TypeVec::TypeVec(int n_, std::vector<int> counts_) : n(n_), counts(std::move(counts_)) {
  if (n < 0) throw DomainError("TypeVec: n must be nonnegative");
  long sum = 0;
  for (int c : counts) {
    if (c < 0) throw DomainError("TypeVec: negative count");
    sum += c;
  }
  if (sum != n) throw DomainError("TypeVec: counts sum to " + std::to_string(sum));
}

double TypeVec::entropy_nats() const { return entropy_of_counts(counts, n); }

std::vector<TypeVec> enum_types(int n, int alphabet_size, std::size_t cap) {
  if (n < 1) throw DomainError("enum_types: n must be >= 1");
  if (alphabet_size < 1) throw DomainError("enum_types: alphabet must be >= 1");
  // count = C(n + k - 1, k - 1)
  double log_count = std::lgamma(n + alphabet_size) - std::lgamma(n + 1.0) -
                     std::lgamma(static_cast<double>(alphabet_size));
  if (log_count > std::log(static_cast<double>(cap))) {
    throw SizeError("enum_types: too many types");
  }
  std::vector<TypeVec> out;
  std::vector<int> cur(static_cast<std::size_t>(alphabet_size), 0);
  std::function<void(int, int)> rec = [&](int idx, int remaining) {
    if (idx == alphabet_size - 1) {
      cur[static_cast<std::size_t>(idx)] = remaining;
      out.emplace_back(n, cur);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      cur[static_cast<std::size_t>(idx)] = c;
      rec(idx + 1, remaining - c);
    }
  };
  rec(0, n);
  return out;
}

CondType::CondType(std::vector<TypeVec> rows_, const TypeVec& base) : rows(std::move(rows_)) {
  if (rows.size() != base.counts.size()) throw ShapeError("CondType: row count mismatch");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].n != base.counts[i]) throw ShapeError("CondType: row sum != base count");
  }
}

JointTypeUX::JointTypeUX(int n_, std::vector<std::vector<int>> counts_)
    : n(n_), counts(std::move(counts_)) {
  if (counts.empty() || counts.front().empty()) throw DomainError("JointTypeUX: empty");
  long sum = 0;
  const std::size_t xs = counts.front().size();
  for (const auto& row : counts) {
    if (row.size() != xs) throw ShapeError("JointTypeUX: ragged rows");
    for (int c : row) {
      if (c < 0) throw DomainError("JointTypeUX: negative count");
      sum += c;
    }
  }
  if (sum != n) throw DomainError("JointTypeUX: counts sum to " + std::to_string(sum));
}

TypeVec JointTypeUX::marginal_u() const {
  std::vector<int> m;
  m.reserve(counts.size());
  for (const auto& row : counts) m.push_back(std::accumulate(row.begin(), row.end(), 0));
  return TypeVec(n, std::move(m));
}

double JointTypeUX::entropy_joint_nats() const {
  double h = 0.0;
  for (const auto& row : counts)
    for (int c : row) h -= xlogx(static_cast<double>(c) / n);
  return h;
}

double JointTypeUX::entropy_u_nats() const { return marginal_u().entropy_nats(); }

double JointTypeUX::entropy_x_given_u_nats() const {
  return entropy_joint_nats() - entropy_u_nats();
}

int MacTypeSpec::n() const { return std::accumulate(t_counts.begin(), t_counts.end(), 0); }

void MacTypeSpec::validate() const {
  if (t_counts.empty()) throw DomainError("MacTypeSpec: empty T");
  if (a_counts.size() != t_counts.size() || b_counts.size() != t_counts.size()) {
    throw ShapeError("MacTypeSpec: per-t row count mismatch");
  }
  for (std::size_t t = 0; t < t_counts.size(); ++t) {
    if (t_counts[t] < 0) throw DomainError("MacTypeSpec: negative t count");
    if (std::accumulate(a_counts[t].begin(), a_counts[t].end(), 0) != t_counts[t]) {
      throw DomainError("MacTypeSpec: A counts for block " + std::to_string(t) + " mismatch");
    }
    if (std::accumulate(b_counts[t].begin(), b_counts[t].end(), 0) != t_counts[t]) {
      throw DomainError("MacTypeSpec: B counts for block " + std::to_string(t) + " mismatch");
    }
    if (a_counts[t].size() != a_counts.front().size() ||
        b_counts[t].size() != b_counts.front().size()) {
      throw ShapeError("MacTypeSpec: ragged alphabet rows");
    }
  }
}

double MacTypeSpec::entropy_a_given_t_nats() const {
  const int total = n();
  double h = 0.0;
  for (std::size_t t = 0; t < t_counts.size(); ++t) {
    if (t_counts[t] == 0) continue;
    h += (static_cast<double>(t_counts[t]) / total) * entropy_of_counts(a_counts[t], t_counts[t]);
  }
  return h;
}

double MacTypeSpec::entropy_b_given_t_nats() const {
  const int total = n();
  double h = 0.0;
  for (std::size_t t = 0; t < t_counts.size(); ++t) {
    if (t_counts[t] == 0) continue;
    h += (static_cast<double>(t_counts[t]) / total) * entropy_of_counts(b_counts[t], t_counts[t]);
  }
  return h;
}

std::vector<int> MacTypeSpec::t_sequence() const {
  std::vector<int> t;
  t.reserve(static_cast<std::size_t>(n()));
  for (std::size_t v = 0; v < t_counts.size(); ++v)
    for (int i = 0; i < t_counts[v]; ++i) t.push_back(static_cast<int>(v));
  return t;
}

// ---------------------------------------------------------------------------
// Conditional-type counting machinery
// ---------------------------------------------------------------------------

namespace {

// Base sequence(s) reduced to cells: positions sharing the same composite
// value form one cell; conditional types are per-cell compositions.
struct CellBase {
  int n = 0;
  int n_cells = 0;
  std::vector<int> cell_of_pos;
  std::vector<int> cell_sizes;
};

CellBase make_cells(const std::vector<const std::vector<int>*>& seqs) {
  CellBase base;
  base.n = static_cast<int>(seqs.front()->size());
  std::map<std::vector<int>, int> ids;
  base.cell_of_pos.resize(static_cast<std::size_t>(base.n));
  for (int i = 0; i < base.n; ++i) {
    std::vector<int> key;
    key.reserve(seqs.size());
    for (const auto* s : seqs) {
      if (static_cast<int>(s->size()) != base.n) throw ShapeError("make_cells: length mismatch");
      key.push_back((*s)[static_cast<std::size_t>(i)]);
    }
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
    base.cell_of_pos[static_cast<std::size_t>(i)] = it->second;
  }
  base.n_cells = static_cast<int>(ids.size());
  base.cell_sizes.assign(static_cast<std::size_t>(base.n_cells), 0);
  for (int c : base.cell_of_pos) ++base.cell_sizes[static_cast<std::size_t>(c)];
  return base;
}

using TypeSig = std::vector<int>;  // cell-major, z-minor counts

TypeSig joint_sig(const CellBase& base, const std::vector<int>& z_seq, int z_size) {
  TypeSig sig(static_cast<std::size_t>(base.n_cells) * static_cast<std::size_t>(z_size), 0);
  for (int i = 0; i < base.n; ++i) {
    const int c = base.cell_of_pos[static_cast<std::size_t>(i)];
    const int z = z_seq[static_cast<std::size_t>(i)];
    ++sig[static_cast<std::size_t>(c) * static_cast<std::size_t>(z_size) +
          static_cast<std::size_t>(z)];
  }
  return sig;
}

double log_orbit_size(const CellBase& base, const TypeSig& sig, int z_size) {
  double lg = 0.0;
  for (int c = 0; c < base.n_cells; ++c) {
    lg += std::lgamma(base.cell_sizes[static_cast<std::size_t>(c)] + 1.0);
    for (int z = 0; z < z_size; ++z) {
      lg -= std::lgamma(sig[static_cast<std::size_t>(c) * static_cast<std::size_t>(z_size) +
                            static_cast<std::size_t>(z)] +
                        1.0);
    }
  }
  return lg;
}

std::vector<int> flatten_pair(const std::vector<int>& a, const std::vector<int>& b,
                              int b_alphabet) {
  std::vector<int> z(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) z[i] = a[i] * b_alphabet + b[i];
  return z;
}

// One packing-inequality family at a fixed base: bound is
// |T_V| * exp(-n * kappa) for every conditional type V.
struct FamilyCheck {
  double worst_margin = 0.0;
  long violations = 0;
};

FamilyCheck check_family(const CellBase& base, const std::vector<std::vector<int>>& targets,
                         int z_size, double kappa) {
  std::map<TypeSig, long> buckets;
  for (const auto& t : targets) ++buckets[joint_sig(base, t, z_size)];
  FamilyCheck out;
  const double n = base.n;
  for (const auto& [sig, cnt] : buckets) {
    const double log_margin =
        std::log(static_cast<double>(cnt)) + n * kappa - log_orbit_size(base, sig, z_size);
    const double margin = std::exp(log_margin);
    out.worst_margin = std::max(out.worst_margin, margin);
    if (margin > 1.0 + 1e-9) ++out.violations;
  }
  // Conditional types with no occupant have count 0 <= bound: the scan over
  // occupied signatures is exhaustive over all V.
  return out;
}

// Uniform draw from a type class: shuffled multiset.
std::vector<int> draw_from_type(const std::vector<int>& counts, std::mt19937_64& rng) {
  std::vector<int> seq;
  for (std::size_t v = 0; v < counts.size(); ++v)
    for (int i = 0; i < counts[v]; ++i) seq.push_back(static_cast<int>(v));
  std::shuffle(seq.begin(), seq.end(), rng);
  return seq;
}

// Uniform draw from a conditional type class: per-cell shuffled multisets.
std::vector<int> draw_conditional(const CellBase& base,
                                  const std::vector<std::vector<int>>& counts_per_cell,
                                  std::mt19937_64& rng) {
  std::vector<std::vector<int>> pools(counts_per_cell.size());
  for (std::size_t c = 0; c < counts_per_cell.size(); ++c) {
    for (std::size_t v = 0; v < counts_per_cell[c].size(); ++v)
      for (int i = 0; i < counts_per_cell[c][v]; ++i) pools[c].push_back(static_cast<int>(v));
    std::shuffle(pools[c].begin(), pools[c].end(), rng);
  }
  std::vector<int> seq(static_cast<std::size_t>(base.n));
  std::vector<std::size_t> next(counts_per_cell.size(), 0);
  for (int i = 0; i < base.n; ++i) {
    const std::size_t c = static_cast<std::size_t>(base.cell_of_pos[static_cast<std::size_t>(i)]);
    seq[static_cast<std::size_t>(i)] = pools[c][next[c]++];
  }
  return seq;
}

int message_count(int n, double rate, double slack_c) {
  const double v = std::exp(n * rate - slack_c * std::pow(static_cast<double>(n), 0.75));
  return static_cast<int>(std::ceil(v - 1e-12));
}

std::map<std::string, double> single_margins(const std::vector<std::vector<int>>& codebook,
                                             double kappa) {
  double worst = 0.0;
  for (std::size_t i = 0; i < codebook.size(); ++i) {
    const CellBase base = make_cells({&codebook[i]});
    std::vector<std::vector<int>> targets;
    for (std::size_t j = 0; j < codebook.size(); ++j) {
      if (j != i) targets.push_back(codebook[j]);
    }
    if (targets.empty()) continue;
    const int z_size = 1 + *std::max_element(codebook[i].begin(), codebook[i].end());
    worst = std::max(worst, check_family(base, targets, z_size, kappa).worst_margin);
  }
  return {{"eq20", worst}};
}

}  // namespace

std::map<std::string, double> verify_packing(const PackedCode& code) {
  std::map<std::string, double> out;
  switch (code.setting) {
    case PackedCode::Setting::single: {
      std::vector<int> counts(static_cast<std::size_t>(code.alphabet), 0);
      for (int v : code.codewords.front()) ++counts[static_cast<std::size_t>(v)];
      const double kappa = TypeVec(code.n, counts).entropy_nats() - code.rate;
      auto m = single_margins(code.codewords, kappa);
      // re-run with the full alphabet as target range
      double worst = 0.0;
      for (std::size_t i = 0; i < code.codewords.size(); ++i) {
        const CellBase base = make_cells({&code.codewords[i]});
        std::vector<std::vector<int>> targets;
        for (std::size_t j = 0; j < code.codewords.size(); ++j)
          if (j != i) targets.push_back(code.codewords[j]);
        if (targets.empty()) continue;
        worst =
            std::max(worst, check_family(base, targets, code.alphabet, kappa).worst_margin);
      }
      out["eq20"] = worst;
      break;
    }
    case PackedCode::Setting::superposition: {
      // reconstruct the joint type from the first (u, x) pair
      std::vector<std::vector<int>> joint(static_cast<std::size_t>(code.u_alphabet),
                                          std::vector<int>(static_cast<std::size_t>(code.x_alphabet), 0));
      const auto& u0 = code.cloud.front();
      const auto& x0 = code.satellites.front().front();
      for (int i = 0; i < code.n; ++i)
        ++joint[static_cast<std::size_t>(u0[static_cast<std::size_t>(i)])]
               [static_cast<std::size_t>(x0[static_cast<std::size_t>(i)])];
      JointTypeUX jt(code.n, joint);
      const double kappa_u = jt.entropy_u_nats() - code.rate_u;
      const double kappa_x = jt.entropy_x_given_u_nats() - code.rate_x;
      const double kappa_ux = jt.entropy_joint_nats() - code.rate_u - code.rate_x;

      double worst_y1 = 0.0, worst_y2 = 0.0, worst_y3 = 0.0;
      for (std::size_t j = 0; j < code.cloud.size(); ++j) {
        const CellBase ubase = make_cells({&code.cloud[j]});
        std::vector<std::vector<int>> other_clouds;
        for (std::size_t j2 = 0; j2 < code.cloud.size(); ++j2)
          if (j2 != j) other_clouds.push_back(code.cloud[j2]);
        if (!other_clouds.empty()) {
          worst_y1 = std::max(
              worst_y1,
              check_family(ubase, other_clouds, code.u_alphabet, kappa_u).worst_margin);
        }
        for (std::size_t k = 0; k < code.satellites[j].size(); ++k) {
          const CellBase pair_base = make_cells({&code.cloud[j], &code.satellites[j][k]});
          std::vector<std::vector<int>> same_cloud;
          for (std::size_t k2 = 0; k2 < code.satellites[j].size(); ++k2)
            if (k2 != k) same_cloud.push_back(code.satellites[j][k2]);
          if (!same_cloud.empty()) {
            worst_y2 = std::max(
                worst_y2,
                check_family(pair_base, same_cloud, code.x_alphabet, kappa_x).worst_margin);
          }
          std::vector<std::vector<int>> other_pairs;
          for (std::size_t j2 = 0; j2 < code.cloud.size(); ++j2) {
            if (j2 == j) continue;
            for (const auto& x : code.satellites[j2])
              other_pairs.push_back(flatten_pair(code.cloud[j2], x, code.x_alphabet));
          }
          if (!other_pairs.empty()) {
            worst_y3 = std::max(worst_y3,
                                check_family(pair_base, other_pairs,
                                             code.u_alphabet * code.x_alphabet, kappa_ux)
                                    .worst_margin);
          }
        }
      }
      out["Y1"] = worst_y1;
      out["Y2"] = worst_y2;
      out["Y3"] = worst_y3;
      break;
    }
    case PackedCode::Setting::mac: {
      MacTypeSpec spec;
      {
        // reconstruct per-block counts from the stored sequences
        int tmax = 0;
        for (int t : code.t_seq) tmax = std::max(tmax, t);
        spec.t_counts.assign(static_cast<std::size_t>(tmax + 1), 0);
        for (int t : code.t_seq) ++spec.t_counts[static_cast<std::size_t>(t)];
        spec.a_counts.assign(spec.t_counts.size(),
                             std::vector<int>(static_cast<std::size_t>(code.a_alphabet), 0));
        spec.b_counts.assign(spec.t_counts.size(),
                             std::vector<int>(static_cast<std::size_t>(code.b_alphabet), 0));
        const auto& a0 = code.a_words.front();
        const auto& b0 = code.b_words.front();
        for (int i = 0; i < code.n; ++i) {
          const auto t = static_cast<std::size_t>(code.t_seq[static_cast<std::size_t>(i)]);
          ++spec.a_counts[t][static_cast<std::size_t>(a0[static_cast<std::size_t>(i)])];
          ++spec.b_counts[t][static_cast<std::size_t>(b0[static_cast<std::size_t>(i)])];
        }
      }
      const double kappa_ab =
          spec.entropy_a_given_t_nats() + spec.entropy_b_given_t_nats() - code.rate_a - code.rate_b;
      const double kappa_b = spec.entropy_b_given_t_nats() - code.rate_b;
      const double kappa_a = spec.entropy_a_given_t_nats() - code.rate_a;

      double worst_x3w = 0.0, worst_x2w = 0.0, worst_x2wh = 0.0;
      for (std::size_t j = 0; j < code.a_words.size(); ++j) {
        for (std::size_t k = 0; k < code.b_words.size(); ++k) {
          const CellBase base = make_cells({&code.a_words[j], &code.b_words[k], &code.t_seq});
          std::vector<std::vector<int>> cross, bs, as;
          for (std::size_t j2 = 0; j2 < code.a_words.size(); ++j2)
            for (std::size_t k2 = 0; k2 < code.b_words.size(); ++k2) {
              if (j2 != j && k2 != k) {
                cross.push_back(
                    flatten_pair(code.a_words[j2], code.b_words[k2], code.b_alphabet));
              }
            }
          for (std::size_t k2 = 0; k2 < code.b_words.size(); ++k2)
            if (k2 != k) bs.push_back(code.b_words[k2]);
          for (std::size_t j2 = 0; j2 < code.a_words.size(); ++j2)
            if (j2 != j) as.push_back(code.a_words[j2]);
          if (!cross.empty()) {
            worst_x3w = std::max(worst_x3w,
                                 check_family(base, cross, code.a_alphabet * code.b_alphabet,
                                              kappa_ab)
                                     .worst_margin);
          }
          if (!bs.empty()) {
            worst_x2w =
                std::max(worst_x2w, check_family(base, bs, code.b_alphabet, kappa_b).worst_margin);
          }
          if (!as.empty()) {
            worst_x2wh = std::max(worst_x2wh,
                                  check_family(base, as, code.a_alphabet, kappa_a).worst_margin);
          }
        }
      }
      out["X3W"] = worst_x3w;
      out["X2W"] = worst_x2w;
      out["X2WH"] = worst_x2wh;
      break;
    }
  }
  return out;
}

namespace {

bool margins_ok(const std::map<std::string, double>& m) {
  for (const auto& [k, v] : m) {
    if (v > 1.0 + 1e-9) return false;
  }
  return true;
}

std::pair<std::string, double> worst_entry(const std::map<std::string, double>& m) {
  std::string key = "none";
  double worst = 0.0;
  for (const auto& [k, v] : m) {
    if (v >= worst) {
      worst = v;
      key = k;
    }
  }
  return {key, worst};
}

}  // namespace

PackedCode pack_single(int n, const TypeVec& type, double rate_nats, double slack_exponent,
                       std::uint64_t seed) {
  if (type.n != n) throw ShapeError("pack_single: type length mismatch");
  if (rate_nats < 0) throw DomainError("pack_single: rate must be >= 0");
  if (rate_nats >= type.entropy_nats()) {
    throw DomainError("pack_single: rate must be below H(type)");
  }
  const int m = message_count(n, rate_nats, slack_exponent);
  const double log_class_size =
      std::lgamma(n + 1.0) - [&] {
        double s = 0.0;
        for (int c : type.counts) s += std::lgamma(c + 1.0);
        return s;
      }();
  if (std::log(static_cast<double>(m)) > log_class_size + 1e-12) {
    throw PackingFailure("pack_single: type class smaller than the message count", "eq20",
                         std::numeric_limits<double>::infinity());
  }

  std::map<std::string, double> last_margins{{"eq20", 0.0}};
  for (std::uint64_t attempt = 0; attempt < 50; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    std::vector<std::vector<int>> codebook;
    int draws = 0;
    const int max_draws = 500 * m + 100;
    const double kappa = type.entropy_nats() - rate_nats;
    while (static_cast<int>(codebook.size()) < m && draws < max_draws) {
      ++draws;
      auto cand = draw_from_type(type.counts, rng);
      if (std::find(codebook.begin(), codebook.end(), cand) != codebook.end()) continue;
      codebook.push_back(std::move(cand));
      if (!margins_ok(single_margins(codebook, kappa))) codebook.pop_back();
    }
    if (static_cast<int>(codebook.size()) < m) continue;
    PackedCode code;
    code.setting = PackedCode::Setting::single;
    code.n = n;
    code.seed = seed;
    code.slack_c = slack_exponent;
    code.codewords = std::move(codebook);
    code.rate = rate_nats;
    code.alphabet = type.alphabet_size();
    code.margins = verify_packing(code);
    if (margins_ok(code.margins)) return code;
    last_margins = code.margins;
  }
  auto [key, worst] = worst_entry(last_margins);
  throw PackingFailure("pack_single: no valid codebook after 50 seeds", key, worst);
}

PackedCode pack_superposition(int n, const JointTypeUX& joint, double rate_u_nats,
                              double rate_x_nats, double slack_exponent, std::uint64_t seed) {
  if (joint.n != n) throw ShapeError("pack_superposition: type length mismatch");
  if (rate_u_nats < 0 || rate_x_nats < 0) throw DomainError("pack_superposition: negative rate");
  if (rate_u_nats >= joint.entropy_u_nats()) {
    throw DomainError("pack_superposition: rate_u must be below H(P_U)");
  }
  if (rate_x_nats >= joint.entropy_x_given_u_nats()) {
    throw DomainError("pack_superposition: rate_x must be below H(X|U)");
  }
  const int m_u = message_count(n, rate_u_nats, slack_exponent);
  const int m_x = message_count(n, rate_x_nats, slack_exponent);
  const TypeVec u_type = joint.marginal_u();

  std::map<std::string, double> last_margins{{"Y1", 0.0}};
  for (std::uint64_t attempt = 0; attempt < 50; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    PackedCode code;
    code.setting = PackedCode::Setting::superposition;
    code.n = n;
    code.seed = seed;
    code.slack_c = slack_exponent;
    code.rate_u = rate_u_nats;
    code.rate_x = rate_x_nats;
    code.u_alphabet = joint.u_size();
    code.x_alphabet = joint.x_size();

    bool failed = false;
    int draws = 0;
    const int max_draws = 500 * (m_u * m_x) + 100;
    while (static_cast<int>(code.cloud.size()) < m_u && draws < max_draws) {
      ++draws;
      auto cand = draw_from_type(u_type.counts, rng);
      if (std::find(code.cloud.begin(), code.cloud.end(), cand) != code.cloud.end()) continue;
      code.cloud.push_back(std::move(cand));
      code.satellites.emplace_back();
      // satellites for this cloud, conditionally typed on u
      const CellBase ub = make_cells({&code.cloud.back()});
      std::vector<std::vector<int>> per_cell(static_cast<std::size_t>(ub.n_cells));
      // cells are ordered by first occurrence; recover which u value each holds
      for (int c = 0; c < ub.n_cells; ++c) {
        for (int i = 0; i < n; ++i) {
          if (ub.cell_of_pos[static_cast<std::size_t>(i)] == c) {
            const int uval = code.cloud.back()[static_cast<std::size_t>(i)];
            per_cell[static_cast<std::size_t>(c)] =
                std::vector<int>(joint.counts[static_cast<std::size_t>(uval)].begin(),
                                 joint.counts[static_cast<std::size_t>(uval)].end());
            break;
          }
        }
      }
      while (static_cast<int>(code.satellites.back().size()) < m_x && draws < max_draws) {
        ++draws;
        auto x = draw_conditional(ub, per_cell, rng);
        auto& sats = code.satellites.back();
        if (std::find(sats.begin(), sats.end(), x) != sats.end()) continue;
        sats.push_back(std::move(x));
        if (!margins_ok(verify_packing(code))) sats.pop_back();
      }
      if (static_cast<int>(code.satellites.back().size()) < m_x) {
        failed = true;
        break;
      }
    }
    if (failed || static_cast<int>(code.cloud.size()) < m_u) continue;
    code.margins = verify_packing(code);
    if (margins_ok(code.margins)) return code;
    last_margins = code.margins;
  }
  auto [key, worst] = worst_entry(last_margins);
  throw PackingFailure("pack_superposition: no valid codebook after 50 seeds", key, worst);
}

PackedCode pack_mac(int n, const MacTypeSpec& type, double rate_a_nats, double rate_b_nats,
                    double slack_exponent, std::uint64_t seed) {
  type.validate();
  if (type.n() != n) throw ShapeError("pack_mac: type length mismatch");
  if (rate_a_nats < 0 || rate_b_nats < 0) throw DomainError("pack_mac: negative rate");
  if (rate_a_nats >= type.entropy_a_given_t_nats()) {
    throw DomainError("pack_mac: rate_a must be below H(A|T)");
  }
  if (rate_b_nats >= type.entropy_b_given_t_nats()) {
    throw DomainError("pack_mac: rate_b must be below H(B|T)");
  }
  const int m_a = message_count(n, rate_a_nats, slack_exponent);
  const int m_b = message_count(n, rate_b_nats, slack_exponent);
  const std::vector<int> t_seq = type.t_sequence();
  const CellBase tb = make_cells({&t_seq});

  std::vector<std::vector<int>> a_cells(type.a_counts.begin(), type.a_counts.end());
  std::vector<std::vector<int>> b_cells(type.b_counts.begin(), type.b_counts.end());

  std::map<std::string, double> last_margins{{"X3W", 0.0}};
  for (std::uint64_t attempt = 0; attempt < 50; ++attempt) {
    std::mt19937_64 rng(seed + attempt);
    for (int inner = 0; inner < 20; ++inner) {
      PackedCode code;
      code.setting = PackedCode::Setting::mac;
      code.n = n;
      code.seed = seed;
      code.slack_c = slack_exponent;
      code.rate_a = rate_a_nats;
      code.rate_b = rate_b_nats;
      code.a_alphabet = type.a_size();
      code.b_alphabet = type.b_size();
      code.t_seq = t_seq;

      int guard = 0;
      while (static_cast<int>(code.a_words.size()) < m_a && guard < 100 * m_a) {
        ++guard;
        auto cand = draw_conditional(tb, a_cells, rng);
        if (std::find(code.a_words.begin(), code.a_words.end(), cand) == code.a_words.end()) {
          code.a_words.push_back(std::move(cand));
        }
      }
      guard = 0;
      while (static_cast<int>(code.b_words.size()) < m_b && guard < 100 * m_b) {
        ++guard;
        auto cand = draw_conditional(tb, b_cells, rng);
        if (std::find(code.b_words.begin(), code.b_words.end(), cand) == code.b_words.end()) {
          code.b_words.push_back(std::move(cand));
        }
      }
      if (static_cast<int>(code.a_words.size()) < m_a ||
          static_cast<int>(code.b_words.size()) < m_b) {
        continue;
      }
      code.margins = verify_packing(code);
      if (margins_ok(code.margins)) return code;
      last_margins = code.margins;
    }
  }
  auto [key, worst] = worst_entry(last_margins);
  throw PackingFailure("pack_mac: no valid codebook after 50 seeds", key, worst);
}

// ---------------------------------------------------------------------------
// Orbit bounds
// ---------------------------------------------------------------------------

double OrbitReport::worst() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.worst_ratio);
  return w;
}

namespace {

struct OrbitAccum {
  double worst = 0.0;
  long checked = 0;

  // LHS/RHS for one (base, target): the exact stabilizer average equals
  // cnt / (|T_V| * m_total); the bound is exp(-n*h + discount) / m_norm.
  void add(const CellBase& base, const std::vector<int>& z_target, int z_size,
           const std::vector<std::vector<int>>& members, double h_nats, double discount,
           double m_norm) {
    const TypeSig sig = joint_sig(base, z_target, z_size);
    long cnt = 0;
    for (const auto& m : members) {
      if (joint_sig(base, m, z_size) == sig) ++cnt;
    }
    ++checked;
    if (cnt == 0) return;
    const double log_ratio = std::log(static_cast<double>(cnt)) - log_orbit_size(base, sig, z_size) -
                             std::log(m_norm) + base.n * h_nats - discount;
    worst = std::max(worst, std::exp(log_ratio));
  }
};

}  // namespace

OrbitReport verify_orbit_bounds(const PackedCode& code,
                                const std::vector<OrbitTarget>& extra_targets) {
  OrbitReport report;
  const double n34 = std::pow(static_cast<double>(code.n), 0.75) * code.slack_c;

  switch (code.setting) {
    case PackedCode::Setting::single: {
      std::vector<int> counts(static_cast<std::size_t>(code.alphabet), 0);
      for (int v : code.codewords.front()) ++counts[static_cast<std::size_t>(v)];
      const double h = TypeVec(code.n, counts).entropy_nats();
      OrbitAccum acc;
      const double m = static_cast<double>(code.codewords.size());
      for (const auto& x : code.codewords) {
        const CellBase base = make_cells({&x});
        for (const auto& other : code.codewords) {
          if (&other == &x) continue;
          acc.add(base, other, code.alphabet, code.codewords, h, n34, m);
        }
        for (const auto& t : extra_targets) {
          if (t.first == x) continue;
          std::vector<int> tc(static_cast<std::size_t>(code.alphabet), 0);
          for (int v : t.first) ++tc[static_cast<std::size_t>(v)];
          if (tc != counts) throw DomainError("verify_orbit_bounds: target type mismatch");
          acc.add(base, t.first, code.alphabet, code.codewords, h, n34, m);
        }
      }
      report.entries.push_back({"8", acc.worst, acc.checked});
      break;
    }
    case PackedCode::Setting::superposition: {
      std::vector<std::vector<int>> joint(
          static_cast<std::size_t>(code.u_alphabet),
          std::vector<int>(static_cast<std::size_t>(code.x_alphabet), 0));
      const auto& u0 = code.cloud.front();
      const auto& x0 = code.satellites.front().front();
      for (int i = 0; i < code.n; ++i)
        ++joint[static_cast<std::size_t>(u0[static_cast<std::size_t>(i)])]
               [static_cast<std::size_t>(x0[static_cast<std::size_t>(i)])];
      JointTypeUX jt(code.n, joint);
      const int zp = code.u_alphabet * code.x_alphabet;
      std::vector<std::vector<int>> all_pairs;
      for (std::size_t j = 0; j < code.cloud.size(); ++j)
        for (const auto& x : code.satellites[j])
          all_pairs.push_back(flatten_pair(code.cloud[j], x, code.x_alphabet));
      const double m_total = static_cast<double>(all_pairs.size());

      OrbitAccum acc_k, acc_i;
      for (std::size_t j = 0; j < code.cloud.size(); ++j) {
        for (std::size_t k = 0; k < code.satellites[j].size(); ++k) {
          const CellBase base = make_cells({&code.cloud[j], &code.satellites[j][k]});
          // (8K): other-cloud pairs
          for (std::size_t j2 = 0; j2 < code.cloud.size(); ++j2) {
            if (j2 == j) continue;
            for (const auto& x2 : code.satellites[j2]) {
              acc_k.add(base, flatten_pair(code.cloud[j2], x2, code.x_alphabet), zp, all_pairs,
                        jt.entropy_joint_nats(), 2.0 * n34, m_total);
            }
          }
          // (8I): same-cloud satellites, with the M_U prefactor
          for (std::size_t k2 = 0; k2 < code.satellites[j].size(); ++k2) {
            if (k2 == k) continue;
            acc_i.add(base, flatten_pair(code.cloud[j], code.satellites[j][k2], code.x_alphabet),
                      zp, all_pairs, jt.entropy_x_given_u_nats(), n34,
                      m_total / static_cast<double>(code.cloud.size()));
          }
          for (const auto& t : extra_targets) {
            if (t.second.empty()) throw DomainError("verify_orbit_bounds: pair target required");
            const auto flat = flatten_pair(t.first, t.second, code.x_alphabet);
            if (t.first == code.cloud[j]) {
              acc_i.add(base, flat, zp, all_pairs, jt.entropy_x_given_u_nats(), n34,
                        m_total / static_cast<double>(code.cloud.size()));
            } else {
              acc_k.add(base, flat, zp, all_pairs, jt.entropy_joint_nats(), 2.0 * n34, m_total);
            }
          }
        }
      }
      report.entries.push_back({"8K", acc_k.worst, acc_k.checked});
      report.entries.push_back({"8I", acc_i.worst, acc_i.checked});
      break;
    }
    case PackedCode::Setting::mac: {
      for (std::size_t i = 1; i < code.t_seq.size(); ++i) {
        if (code.t_seq[i] < code.t_seq[i - 1]) {
          throw DomainError("verify_orbit_bounds: t sequence must be in sorted block form");
        }
      }
      MacTypeSpec spec;
      int tmax = 0;
      for (int t : code.t_seq) tmax = std::max(tmax, t);
      spec.t_counts.assign(static_cast<std::size_t>(tmax + 1), 0);
      for (int t : code.t_seq) ++spec.t_counts[static_cast<std::size_t>(t)];
      spec.a_counts.assign(spec.t_counts.size(),
                           std::vector<int>(static_cast<std::size_t>(code.a_alphabet), 0));
      spec.b_counts.assign(spec.t_counts.size(),
                           std::vector<int>(static_cast<std::size_t>(code.b_alphabet), 0));
      for (int i = 0; i < code.n; ++i) {
        const auto t = static_cast<std::size_t>(code.t_seq[static_cast<std::size_t>(i)]);
        ++spec.a_counts[t][static_cast<std::size_t>(code.a_words.front()[static_cast<std::size_t>(i)])];
        ++spec.b_counts[t][static_cast<std::size_t>(code.b_words.front()[static_cast<std::size_t>(i)])];
      }
      const double h_ab = spec.entropy_a_given_t_nats() + spec.entropy_b_given_t_nats();
      const int zp = code.a_alphabet * code.b_alphabet;
      std::vector<std::vector<int>> all_pairs;
      for (const auto& a : code.a_words)
        for (const auto& b : code.b_words) all_pairs.push_back(flatten_pair(a, b, code.b_alphabet));
      const double ma = static_cast<double>(code.a_words.size());
      const double mb = static_cast<double>(code.b_words.size());

      OrbitAccum acc_yw, acc_lw, acc_lwh;
      for (std::size_t j = 0; j < code.a_words.size(); ++j) {
        for (std::size_t k = 0; k < code.b_words.size(); ++k) {
          const CellBase base = make_cells({&code.a_words[j], &code.b_words[k]});
          for (std::size_t j2 = 0; j2 < code.a_words.size(); ++j2) {
            for (std::size_t k2 = 0; k2 < code.b_words.size(); ++k2) {
              if (j2 == j && k2 == k) continue;
              const auto flat =
                  flatten_pair(code.a_words[j2], code.b_words[k2], code.b_alphabet);
              if (j2 != j && k2 != k) {
                acc_yw.add(base, flat, zp, all_pairs, h_ab, 2.0 * n34, ma * mb);
              } else if (j2 == j && k2 != k) {
                acc_lw.add(base, flat, zp, all_pairs, spec.entropy_b_given_t_nats(), n34, mb);
              } else {
                acc_lwh.add(base, flat, zp, all_pairs, spec.entropy_a_given_t_nats(), n34, ma);
              }
            }
          }
          for (const auto& t : extra_targets) {
            if (t.second.empty()) throw DomainError("verify_orbit_bounds: pair target required");
            const auto flat = flatten_pair(t.first, t.second, code.b_alphabet);
            if (t.first == code.a_words[j] && t.second != code.b_words[k]) {
              acc_lw.add(base, flat, zp, all_pairs, spec.entropy_b_given_t_nats(), n34, mb);
            } else if (t.first != code.a_words[j] && t.second == code.b_words[k]) {
              acc_lwh.add(base, flat, zp, all_pairs, spec.entropy_a_given_t_nats(), n34, ma);
            } else if (t.first != code.a_words[j]) {
              acc_yw.add(base, flat, zp, all_pairs, h_ab, 2.0 * n34, ma * mb);
            }
          }
        }
      }
      report.entries.push_back({"8YW", acc_yw.worst, acc_yw.checked});
      report.entries.push_back({"8LW", acc_lw.worst, acc_lw.checked});
      report.entries.push_back({"8LWH", acc_lwh.worst, acc_lwh.checked});
      break;
    }
  }
  return report;
}

PermGroupHandle PermGroupHandle::of(const std::vector<std::vector<int>>& sequences) {
  if (sequences.empty()) throw DomainError("PermGroupHandle: no sequences");
  std::vector<const std::vector<int>*> ptrs;
  ptrs.reserve(sequences.size());
  for (const auto& s : sequences) ptrs.push_back(&s);
  const CellBase base = make_cells(ptrs);

  PermGroupHandle h;
  h.base = sequences;
  std::vector<std::vector<int>> positions(static_cast<std::size_t>(base.n_cells));
  for (int i = 0; i < base.n; ++i) {
    positions[static_cast<std::size_t>(base.cell_of_pos[static_cast<std::size_t>(i)])].push_back(i);
  }
  for (const auto& pos : positions) {
    h.log_order += std::lgamma(static_cast<double>(pos.size()) + 1.0);
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) h.generators.emplace_back(pos[i], pos[i + 1]);
  }
  return h;
}

}  // namespace cqcode
