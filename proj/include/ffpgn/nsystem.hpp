#pragma once

// Integer n-systems on the grid q = 0..Q: validation, the canonical switch
// representation, the extremal system, random generation and graph export.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ffpgn/errors.hpp"

namespace ffpgn {

/// Values P(0..Q), each a sorted n-vector of integers.
struct Profile {
  std::size_t n = 0;
  int Q = 0;
  std::vector<std::vector<int>> values;

  const std::vector<int>& at(int q) const { return values.at(static_cast<std::size_t>(q)); }
  friend bool operator==(const Profile&, const Profile&) = default;
};

struct ProfileViolation {
  int q = 0;
  std::string condition;  // "shape", "S1", "S2", "S3", "sorted", "origin"
  std::string detail;
};

/// 1-based sorted position that rises from q to q+1, or nullopt when the
/// difference is not a single unit step.
inline std::optional<std::size_t> rising_index(const std::vector<int>& a, const std::vector<int>& b) {
  std::optional<std::size_t> r;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const int d = b[j] - a[j];
    if (d == 0) continue;
    if (d != 1 || r) return std::nullopt;
    r = j + 1;
  }
  return r;
}

/// First violated condition, or nullopt for a valid n-system on [0, Q].
inline std::optional<ProfileViolation> validate_profile(const Profile& p) {
  if (p.n < 2) return ProfileViolation{0, "shape", "n must be at least 2"};
  if (p.Q < 0 || p.values.size() != static_cast<std::size_t>(p.Q) + 1)
    return ProfileViolation{0, "shape", "expected Q+1 value rows"};
  for (int q = 0; q <= p.Q; ++q) {
    const auto& v = p.at(q);
    if (v.size() != p.n) return ProfileViolation{q, "shape", "row has wrong length"};
    if (!std::is_sorted(v.begin(), v.end())) return ProfileViolation{q, "sorted", "components not non-decreasing"};
    if (v.front() < 0) return ProfileViolation{q, "sorted", "negative component"};
    long s = 0;
    for (int x : v) s += x;
    if (s != q) return ProfileViolation{q, "S1", "components sum to " + std::to_string(s)};
  }
  std::optional<std::size_t> prev;
  for (int q = 0; q < p.Q; ++q) {
    auto r = rising_index(p.at(q), p.at(q + 1));
    if (!r) return ProfileViolation{q, "S2", "P(q+1) - P(q) is not a unit vector"};
    if (prev && *r > *prev) {
      const auto& v = p.at(q);
      for (std::size_t j = *prev; j < *r; ++j)
        if (v[j - 1] != v[j])
          return ProfileViolation{q, "S3",
                                  "rising index moves up from " + std::to_string(*prev) + " to " +
                                      std::to_string(*r) + " across unequal components"};
    }
    prev = r;
  }
  return std::nullopt;
}

/// The system with P_n - P_1 <= 1 everywhere.
inline Profile extremal(std::size_t n, int Q) {
  if (n < 2) throw PreconditionError("extremal system needs n >= 2");
  if (Q < 0) throw PreconditionError("negative horizon");
  Profile p{n, Q, {}};
  const int ni = static_cast<int>(n);
  for (int q = 0; q <= Q; ++q) {
    const int m = q / ni, r = q % ni;
    std::vector<int> v(n, m);
    for (int i = 1; i <= ni; ++i)
      if (i >= ni - r + 1) v[static_cast<std::size_t>(i - 1)] = m + 1;
    p.values.push_back(std::move(v));
  }
  return p;
}

/// One switch (q_i, k_i, l_i), with 1-based sorted indices.
struct SwitchRecord {
  int q = 0;
  std::size_t k = 0;
  std::size_t l = 0;
  friend bool operator==(const SwitchRecord&, const SwitchRecord&) = default;
};

/// Canonical switch data; records[0] must be (0, n, n). Without a horizon the
/// last segment extends forever.
struct SwitchData {
  std::size_t n = 0;
  std::optional<int> horizon;
  std::vector<SwitchRecord> records;
  friend bool operator==(const SwitchData&, const SwitchData&) = default;
};

namespace detail {

// P(q) on the segment starting at base = P(q_i) whose rising component sits
// at sorted position k: drop it and insert its advanced value.
inline std::vector<int> advance(const std::vector<int>& base, std::size_t k, int steps) {
  std::vector<int> v = base;
  const int moving = v[k - 1] + steps;
  v.erase(v.begin() + static_cast<std::ptrdiff_t>(k - 1));
  v.insert(std::upper_bound(v.begin(), v.end(), moving), moving);
  return v;
}

}  // namespace detail

/// Evaluates switch data on [0, Q], checking the switch-data conditions on the way.
inline Profile eval_switches(const SwitchData& s, int Q) {
  const std::size_t n = s.n;
  if (n < 2) throw PreconditionError("switch data needs n >= 2");
  if (Q < 0) throw PreconditionError("negative horizon");
  if (s.records.empty() || s.records[0] != SwitchRecord{0, n, n})
    throw PreconditionError("switch data must start with the record (0, n, n)");
  std::vector<SwitchRecord> recs;
  for (const auto& r : s.records)
    if (r.q <= Q) recs.push_back(r);
  Profile p{n, Q, {}};
  std::vector<int> base(n, 0);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (i > 0) {
      const auto& prev = recs[i - 1];
      const std::string at = " at switch q=" + std::to_string(r.q);
      if (r.q <= prev.q) throw PreconditionError("switch points must increase strictly" + at);
      if (!(1 <= r.k && r.k < r.l && r.l <= n)) throw PreconditionError("switch indices need 1 <= k < l <= n" + at);
      std::vector<int> here = detail::advance(base, prev.k, r.q - prev.q);
      const int moving = r.q - prev.q + base[prev.k - 1];
      if (r.l < prev.k) throw PreconditionError("landing index l below the previous rising index" + at);
      if (here[r.l - 1] != moving) throw PreconditionError("P_l(q_i) does not equal the moving value" + at);
      if (!(here[r.k - 1] < here[r.l - 1])) throw PreconditionError("switch requires P_k(q_i) < P_l(q_i)" + at);
      base = std::move(here);
    }
    const int end = i + 1 < recs.size() ? recs[i + 1].q : Q + 1;
    for (int q = r.q; q < end; ++q) p.values.push_back(detail::advance(base, r.k, q - r.q));
  }
  return p;
}

/// Canonical switch data with maximal intervals; among equal candidates the
/// landing index l is the largest admissible one.
inline SwitchData to_switches(const Profile& p) {
  if (auto v = validate_profile(p))
    throw PreconditionError("invalid profile at q=" + std::to_string(v->q) + " (" + v->condition + "): " + v->detail);
  const std::size_t n = p.n;
  SwitchData s{n, p.Q, {{0, n, n}}};
  int qi = 0;
  int base_value = 0;  // P_{k_i}(q_i)
  for (int q = 1; q < p.Q; ++q) {
    const auto& v = p.at(q);
    const std::size_t r = *rising_index(v, p.at(q + 1));
    const int moving = q - qi + base_value;
    if (v[r - 1] == moving) continue;
    std::size_t l = n;
    while (v[l - 1] != moving) --l;
    s.records.push_back({q, r, l});
    qi = q;
    base_value = v[r - 1];
  }
  return s;
}

/// Random valid profile from a rising-index walk respecting (S3). A change of
/// rising component happens with probability switch_prob while fewer than
/// max_switches changes have been made.
template <class URBG>
Profile random_profile(std::size_t n, int Q, URBG& rng, double switch_prob = 0.3, int max_switches = 1 << 30) {
  Profile p{n, Q, {std::vector<int>(n, 0)}};
  int moving = 0;  // value of the component that rose last
  int switches = 0;
  std::bernoulli_distribution coin(switch_prob);
  for (int q = 0; q < Q; ++q) {
    std::vector<int> v = p.values.back();
    // block ends with value below the moving value are switch targets
    std::vector<std::size_t> lower;
    for (std::size_t j = 1; j <= n; ++j)
      if ((j == n || v[j] != v[j - 1]) && v[j - 1] < moving) lower.push_back(j);
    std::size_t r;
    if (q > 0 && !lower.empty() && switches < max_switches && coin(rng)) {
      r = lower[std::uniform_int_distribution<std::size_t>(0, lower.size() - 1)(rng)];
      ++switches;
    } else {
      r = n;
      while (v[r - 1] != moving) --r;
    }
    moving = v[r - 1] + 1;
    ++v[r - 1];
    p.values.push_back(std::move(v));
  }
  return p;
}

/// Random canonical switch data with at most max_switches switches below N.
template <class URBG>
SwitchData random_switch_data(std::size_t n, int N, int max_switches, URBG& rng, double switch_prob = 0.35) {
  SwitchData s = to_switches(random_profile(n, N, rng, switch_prob, max_switches));
  s.horizon = N;
  return s;
}

/// CSV rows "q,P1..Pn,rising" with "-" as the rising index at the horizon.
inline std::string combined_graph_csv(const Profile& p) {
  if (auto v = validate_profile(p)) throw PreconditionError("invalid profile: " + v->detail);
  std::ostringstream out;
  out << "q";
  for (std::size_t j = 1; j <= p.n; ++j) out << ",P" << j;
  out << ",rising\n";
  for (int q = 0; q <= p.Q; ++q) {
    out << q;
    for (int x : p.at(q)) out << ',' << x;
    out << ',';
    if (q < p.Q) out << *rising_index(p.at(q), p.at(q + 1));
    else out << '-';
    out << '\n';
  }
  return out.str();
}

/// SVG with one polyline per component and a dot at every switch point.
inline std::string combined_graph_svg(const Profile& p) {
  if (auto v = validate_profile(p)) throw PreconditionError("invalid profile: " + v->detail);
  const int scale = 24, margin = 20;
  const int top = p.values.back().back();
  const int width = p.Q * scale + 2 * margin, height = std::max(1, top) * scale + 2 * margin;
  auto x = [&](int q) { return margin + q * scale; };
  auto y = [&](int val) { return height - margin - val * scale; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<line x1=\"" << x(0) << "\" y1=\"" << y(0) << "\" x2=\"" << x(p.Q) << "\" y2=\"" << y(0)
      << "\" stroke=\"#999\"/>\n";
  for (std::size_t j = 0; j < p.n; ++j) {
    out << "<polyline fill=\"none\" stroke=\"" << colors[j % 6] << "\" stroke-width=\"2\" points=\"";
    for (int q = 0; q <= p.Q; ++q) out << (q ? " " : "") << x(q) << ',' << y(p.at(q)[j]);
    out << "\"/>\n";
  }
  const SwitchData s = to_switches(p);
  for (std::size_t i = 1; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    out << "<circle cx=\"" << x(r.q) << "\" cy=\"" << y(p.at(r.q)[r.l - 1]) << "\" r=\"3\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ffpgn
