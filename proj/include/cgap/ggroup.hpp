#pragma once

// The group G: a tree of groups with centre F = *ₖ Mₖ and leaves
// Hᵢ = ℤ/2 * ℤ = ⟨σᵢ⟩ * ⟨tᵢ⟩, the edge group Aᵢ = *ₖ⟨σᵢ(k)⟩ being identified
// with ⟨σᵢ^{(mₖ)} : k⟩ < Hᵢ. Elements are kept in the normal form
//
//   f₀ h₁ f₁ h₂ … hₙ fₙ,   fⱼ ∈ F (free-product words), hⱼ ∈ H_{iⱼ} \ A_{iⱼ},
//
// obtained in two passes. First every fⱼ (j < n) becomes a fixed representative
// of fⱼA_{iⱼ₊₁} and every hⱼ one of hⱼA_{iⱼ}, left to right. Then the leading
// letters σᵢ(k) of each fⱼ₊₁ are moved back into the preceding Hᵢ-syllable hⱼ,
// so an H-syllable ends in σt⁻ᵐᵏ only when the next syllable is not in Mₖ.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cgap/error.hpp"
#include "cgap/group_core.hpp"
#include "cgap/profile.hpp"

namespace cgap {

/// Element of ℤ/2 * ℤ as a reduced token list: 0 is σ, a ≠ 0 is tᵃ.
class HWord {
 public:
  HWord() = default;
  explicit HWord(std::vector<std::int32_t> tokens) {
    for (auto t : tokens) push(t);
  }
  static HWord sigma() { return HWord({0}); }
  static HWord t(std::int32_t a) { return a == 0 ? HWord() : HWord({a}); }
  /// σ^{(j)} = tʲσt⁻ʲ.
  static HWord sigma_conj(std::int32_t j) { return j == 0 ? sigma() : HWord({j, 0, -j}); }

  const std::vector<std::int32_t>& tokens() const { return tok_; }
  bool is_identity() const { return tok_.empty(); }
  int length() const {
    int n = 0;
    for (auto a : tok_) n += a == 0 ? 1 : std::abs(a);
    return n;
  }

  void push(std::int32_t a) {
    if (tok_.empty()) {
      tok_.push_back(a);
      return;
    }
    std::int32_t& top = tok_.back();
    if (a == 0 && top == 0) {
      tok_.pop_back();
    } else if (a != 0 && top != 0) {
      top += a;
      if (top == 0) tok_.pop_back();
    } else {
      tok_.push_back(a);
    }
  }

  HWord operator*(const HWord& o) const {
    HWord r = *this;
    for (auto a : o.tok_) r.push(a);
    return r;
  }
  HWord inverse() const {
    HWord r;
    for (auto it = tok_.rbegin(); it != tok_.rend(); ++it) r.push(*it == 0 ? 0 : -*it);
    return r;
  }
  bool operator==(const HWord&) const = default;

 private:
  std::vector<std::int32_t> tok_;
};

struct MSyl {
  int k = 0;        // 0-based position among the members of G
  Element e = 0;
  bool operator==(const MSyl&) const = default;
};

struct HSyl {
  int i = 0;        // 0-based branch index
  HWord w;
  bool operator==(const HSyl&) const = default;
};

using Syllable = std::variant<MSyl, HSyl>;

using FWord = std::vector<MSyl>;

struct GElement {
  std::vector<FWord> f{FWord{}};  // size h.size() + 1
  std::vector<HSyl> h;
  bool operator==(const GElement&) const = default;
  bool is_identity() const { return h.empty() && f.front().empty(); }
};

/// Letter of the extended normal form.
struct Letter {
  enum class Kind : std::uint8_t { kM, kSigma, kT, kTInv };
  Kind kind = Kind::kM;
  int index = 0;      // member k for kM, branch i otherwise
  Element element = 0;
  bool operator==(const Letter&) const = default;
  bool operator<(const Letter& o) const {
    return std::tie(kind, index, element) < std::tie(o.kind, o.index, o.element);
  }
};

struct WeightedLength {
  long weight = 0;
  double lower = 0;  // weight/3 for the canonical form
  std::optional<int> exact;
};

enum class DistanceCase { kS, kB, kEqual };

struct PrefixDecomposition {
  std::vector<Letter> p;
  std::optional<Letter> f_gh, f_hg;
  std::vector<Letter> q_gh, q_hg;
  DistanceCase tag = DistanceCase::kEqual;
};

struct DistanceBracket {
  long A = 0;
  double lo = 0, hi = 0;
  DistanceCase tag = DistanceCase::kEqual;
};

class GGroup {
 public:
  /// Members are the groups Mₖ in order, with their μₖ, mₖ. All must present
  /// the same number of distinct non-identity generators, and the mₖ must be
  /// distinct.
  GGroup(std::vector<GroupPtr> members, std::vector<int> m_values) : members_(std::move(members)), m_(std::move(m_values)) {
    if (members_.empty()) throw Error(ErrorKind::kInvalidArgument, "G needs at least one member");
    if (members_.size() != m_.size()) throw Error(ErrorKind::kInvalidArgument, "one m value per member");
    branches_ = static_cast<int>(members_.front()->degree());
    for (std::size_t k = 0; k < members_.size(); ++k) {
      const auto& g = *members_[k];
      if (static_cast<int>(g.degree()) != branches_)
        throw Error(ErrorKind::kInvalidArgument, "members of G must share the generator count");
      if (!g.distinct_generators())
        throw Error(ErrorKind::kInvalidArgument, g.label() + " repeats a generator; G needs distinct involutions");
      validate_group(g);
      if (m_[k] < 0) throw Error(ErrorKind::kInvalidArgument, "m values must be non-negative");
      if (!j_to_k_.emplace(m_[k], static_cast<int>(k)).second)
        throw Error(ErrorKind::kInvalidArgument, "m values must be distinct");
      CayleyGraph cg(members_[k]);
      lengths_.push_back(bfs_distances(cg, 0));
      diameters_.push_back(*std::max_element(lengths_.back().begin(), lengths_.back().end()));
    }
  }

  /// G over the selected subsequence of a family under profile ρ.
  static GGroup from_family(const std::vector<GroupPtr>& family, const CompressionProfile& rho) {
    std::vector<double> v;
    for (const auto& g : family) v.push_back(static_cast<double>(g->order()));
    const auto seq = scaling_sequence(rho, v);
    std::vector<GroupPtr> members;
    std::vector<int> ms;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (seq.entries[i].selected) {
        members.push_back(family[i]);
        ms.push_back(members.size() == 1 ? 0 : seq.entries[i].m);
      }
    return GGroup(std::move(members), std::move(ms));
  }

  int member_count() const { return static_cast<int>(members_.size()); }
  int branches() const { return branches_; }
  const GroupPtr& member(int k) const { return members_.at(static_cast<std::size_t>(k)); }
  int m_of(int k) const { return m_.at(static_cast<std::size_t>(k)); }
  int mu_of(int k) const { return 2 * m_of(k) + 1; }
  int length_in_member(int k, Element e) const { return lengths_[static_cast<std::size_t>(k)][e]; }
  int diameter_of(int k) const { return diameters_[static_cast<std::size_t>(k)]; }
  int member_distance(int k, Element a, Element b) const {
    const auto& g = *members_[static_cast<std::size_t>(k)];
    return length_in_member(k, g.mul(g.inverse(a), b));
  }
  Element sigma_of(int i, int k) const { return members_[static_cast<std::size_t>(k)]->generator(static_cast<std::size_t>(i)); }

  GElement identity() const { return {}; }

  // -------------------------------------------------------------------------
  // Edge groups

  /// Writes b ∈ Aᵢ as M-syllables σᵢ(k₁)…σᵢ(k_r); false when b ∉ Aᵢ.
  bool h_in_edge(const HWord& b, int i, FWord* out) const {
    std::int32_t c = 0;
    FWord syl;
    for (auto a : b.tokens()) {
      if (a != 0) {
        c += a;
        continue;
      }
      auto it = j_to_k_.find(c);
      if (it == j_to_k_.end()) return false;
      syl.push_back({it->second, sigma_of(i, it->second)});
    }
    if (c != 0) return false;
    if (out) *out = std::move(syl);
    return true;
  }

  bool f_in_edge(const FWord& f, int i) const {
    return std::all_of(f.begin(), f.end(), [&](const MSyl& s) { return s.e == sigma_of(i, s.k); });
  }

  /// Image in Hᵢ of an F-word lying in Aᵢ.
  HWord f_to_h(const FWord& f, int i) const {
    HWord r;
    for (const auto& s : f) r = r * HWord::sigma_conj(m_of(s.k));
    (void)i;
    return r;
  }

  // -------------------------------------------------------------------------
  // Reduction

  void push_m(GElement& g, const MSyl& s) const {
    check_m(s);
    if (s.e == 0) return;
    FWord& f = g.f.back();
    if (!f.empty() && f.back().k == s.k) {
      const Element e = members_[static_cast<std::size_t>(s.k)]->mul(f.back().e, s.e);
      if (e == 0) f.pop_back();
      else f.back().e = e;
    } else {
      f.push_back(s);
    }
  }

  void push_h(GElement& g, HSyl b) const {
    check_i(b.i);
    for (;;) {
      if (b.w.is_identity()) return;
      FWord as_m;
      if (h_in_edge(b.w, b.i, &as_m)) {
        for (const auto& s : as_m) push_m(g, s);
        return;
      }
      if (!g.h.empty() && g.h.back().i == b.i && f_in_edge(g.f.back(), b.i)) {
        HWord merged = g.h.back().w * f_to_h(g.f.back(), b.i) * b.w;
        g.f.pop_back();
        g.h.pop_back();
        b.w = std::move(merged);
        continue;
      }
      g.h.push_back(std::move(b));
      g.f.emplace_back();
      return;
    }
  }

  void push(GElement& g, const Syllable& s) const {
    if (const auto* m = std::get_if<MSyl>(&s)) push_m(g, *m);
    else push_h(g, std::get<HSyl>(s));
  }

  // -------------------------------------------------------------------------
  // Coset representatives

  /// Representative of s⟨σᵢ(k)⟩: the shorter of s, s·σᵢ(k), ties by index.
  Element m_rep(int k, int i, Element s) const {
    const Element t = members_[static_cast<std::size_t>(k)]->mul(s, sigma_of(i, k));
    const auto key = [&](Element x) { return std::make_pair(length_in_member(k, x), x); };
    return key(t) < key(s) ? t : s;
  }

  /// Rewrites f as f*·a with f* a representative of fAᵢ; returns a ∈ Aᵢ < Hᵢ.
  HWord strip_f(FWord& f, int i) const {
    HWord push;
    while (!f.empty()) {
      MSyl& s = f.back();
      const Element sig = sigma_of(i, s.k);
      if (s.e == sig) {
        push = HWord::sigma_conj(m_of(s.k)) * push;
        f.pop_back();
        continue;
      }
      const Element r = m_rep(s.k, i, s.e);
      if (r != s.e) {
        push = HWord::sigma_conj(m_of(s.k)) * push;
        s.e = r;
      }
      break;
    }
    return push;
  }

  /// Rewrites b as b*·a with b* a representative of bAᵢ (no suffix σt⁻ʲ with
  /// j some mₖ); returns a as an F-word.
  FWord strip_h(HWord& b, int i) const {
    FWord push;
    for (;;) {
      const auto& t = b.tokens();
      if (t.empty()) break;
      std::int32_t j;
      if (t.back() == 0) {
        j = 0;
      } else if (t.size() >= 2 && t[t.size() - 2] == 0 && t.back() < 0) {
        j = -t.back();
      } else {
        break;
      }
      auto it = j_to_k_.find(j);
      if (it == j_to_k_.end()) break;
      b = b * HWord::sigma_conj(j);
      push.insert(push.begin(), MSyl{it->second, sigma_of(i, it->second)});
    }
    return push;
  }

  FWord f_mul(const FWord& a, const FWord& b) const {
    GElement tmp;
    tmp.f.front() = a;
    for (const auto& s : b) push_m(tmp, s);
    return std::move(tmp.f.front());
  }

  /// Transversal normalization of a reduced form.
  void normalize(GElement& g) const {
    const std::size_t n = g.h.size();
    for (std::size_t j = 0; j < n; ++j) {
      const int i = g.h[j].i;
      const HWord left = strip_f(g.f[j], i);
      g.h[j].w = left * g.h[j].w;
      const FWord right = strip_h(g.h[j].w, i);
      g.f[j + 1] = f_mul(right, g.f[j + 1]);
    }
    // Leading letters σᵢ(k) of the F-part after an Hᵢ-syllable move into it.
    for (std::size_t j = 0; j < n; ++j) {
      const int i = g.h[j].i;
      FWord& f = g.f[j + 1];
      std::size_t lead = 0;
      while (lead < f.size() && f[lead].e == sigma_of(i, f[lead].k)) {
        g.h[j].w = g.h[j].w * HWord::sigma_conj(m_of(f[lead].k));
        ++lead;
      }
      f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(lead));
    }
  }

  GElement canonicalize(const std::vector<Syllable>& raw) const {
    GElement g;
    for (const auto& s : raw) push(g, s);
    normalize(g);
    return g;
  }

  std::vector<Syllable> syllables(const GElement& g) const {
    std::vector<Syllable> out;
    for (std::size_t j = 0; j < g.f.size(); ++j) {
      for (const auto& s : g.f[j]) out.emplace_back(s);
      if (j < g.h.size()) out.emplace_back(g.h[j]);
    }
    return out;
  }

  GElement mul(const GElement& a, const GElement& b) const {
    GElement g = a;
    for (const auto& s : syllables(b)) push(g, s);
    normalize(g);
    return g;
  }

  GElement mul(const GElement& a, const Syllable& s) const {
    GElement g = a;
    push(g, s);
    normalize(g);
    return g;
  }

  GElement inverse(const GElement& g) const {
    auto syl = syllables(g);
    std::reverse(syl.begin(), syl.end());
    GElement r;
    for (auto& s : syl) {
      if (auto* m = std::get_if<MSyl>(&s)) {
        push_m(r, {m->k, members_[static_cast<std::size_t>(m->k)]->inverse(m->e)});
      } else {
        auto& hs = std::get<HSyl>(s);
        push_h(r, {hs.i, hs.w.inverse()});
      }
    }
    normalize(r);
    return r;
  }

  // -------------------------------------------------------------------------
  // Generators U = {σᵢ(1), tᵢ} and their inverses

  std::vector<Syllable> generator_moves() const {
    std::vector<Syllable> u;
    for (int i = 0; i < branches_; ++i) u.emplace_back(MSyl{0, sigma_of(i, 0)});
    for (int i = 0; i < branches_; ++i) {
      u.emplace_back(HSyl{i, HWord::t(1)});
      u.emplace_back(HSyl{i, HWord::t(-1)});
    }
    return u;
  }

  // -------------------------------------------------------------------------
  // Extended normal form, weight

  std::vector<Letter> letters(const GElement& g) const {
    std::vector<Letter> out;
    for (const auto& s : syllables(g)) {
      if (const auto* m = std::get_if<MSyl>(&s)) {
        out.push_back({Letter::Kind::kM, m->k, m->e});
        continue;
      }
      const auto& hs = std::get<HSyl>(s);
      for (auto a : hs.w.tokens()) {
        if (a == 0) {
          out.push_back({Letter::Kind::kSigma, hs.i, 0});
        } else {
          const Letter l{a > 0 ? Letter::Kind::kT : Letter::Kind::kTInv, hs.i, 0};
          for (int r = 0; r < std::abs(a); ++r) out.push_back(l);
        }
      }
    }
    return out;
  }

  long letter_weight(const Letter& l) const {
    if (l.kind == Letter::Kind::kM) return static_cast<long>(mu_of(l.index)) * length_in_member(l.index, l.element);
    return 1;
  }

  long weight(const std::vector<Letter>& word) const {
    long w = 0;
    for (const auto& l : word) w += letter_weight(l);
    return w;
  }

  long weight(const GElement& g) const {
    long w = 0;
    for (const auto& f : g.f)
      for (const auto& s : f) w += static_cast<long>(mu_of(s.k)) * length_in_member(s.k, s.e);
    for (const auto& b : g.h) w += b.w.length();
    return w;
  }

  WeightedLength weighted_length(const GElement& g, std::optional<int> exact = std::nullopt) const {
    WeightedLength r;
    r.weight = weight(g);
    r.lower = static_cast<double>(r.weight) / 3.0;
    r.exact = exact;
    return r;
  }

  /// Longest common prefix of the extended normal forms and the first letters
  /// after it. An empty side facing an M-letter counts as the identity of that
  /// Mₖ (case S).
  PrefixDecomposition prefix_decompose(const GElement& g, const GElement& h) const {
    const auto lg = letters(g), lh = letters(h);
    std::size_t c = 0;
    while (c < lg.size() && c < lh.size() && lg[c] == lh[c]) ++c;
    PrefixDecomposition d;
    d.p.assign(lg.begin(), lg.begin() + static_cast<std::ptrdiff_t>(c));
    if (c < lg.size()) {
      d.f_gh = lg[c];
      d.q_gh.assign(lg.begin() + static_cast<std::ptrdiff_t>(c) + 1, lg.end());
    }
    if (c < lh.size()) {
      d.f_hg = lh[c];
      d.q_hg.assign(lh.begin() + static_cast<std::ptrdiff_t>(c) + 1, lh.end());
    }
    if (!d.f_gh && !d.f_hg) {
      d.tag = DistanceCase::kEqual;
    } else if (d.f_gh && d.f_hg) {
      d.tag = (d.f_gh->kind == Letter::Kind::kM && d.f_hg->kind == Letter::Kind::kM && d.f_gh->index == d.f_hg->index)
                  ? DistanceCase::kS
                  : DistanceCase::kB;
    } else {
      const Letter& only = d.f_gh ? *d.f_gh : *d.f_hg;
      d.tag = only.kind == Letter::Kind::kM ? DistanceCase::kS : DistanceCase::kB;
    }
    return d;
  }

  DistanceBracket distance_bracket(const GElement& g, const GElement& h) const {
    const auto d = prefix_decompose(g, h);
    DistanceBracket b;
    b.tag = d.tag;
    if (d.tag == DistanceCase::kEqual) return b;
    if (d.tag == DistanceCase::kS) {
      const int k = (d.f_gh ? d.f_gh : d.f_hg)->index;
      const Element a = d.f_gh ? d.f_gh->element : 0;
      const Element c = d.f_hg ? d.f_hg->element : 0;
      b.A = static_cast<long>(mu_of(k)) * member_distance(k, a, c) + weight(d.q_gh) + weight(d.q_hg);
    } else {
      b.A = (d.f_gh ? letter_weight(*d.f_gh) : 0) + weight(d.q_gh) + (d.f_hg ? letter_weight(*d.f_hg) : 0) +
            weight(d.q_hg);
    }
    b.hi = static_cast<double>(b.A);
    b.lo = b.hi / 9.0;
    return b;
  }

  // -------------------------------------------------------------------------
  // Compact keys

  std::string key(const GElement& g) const {
    std::string s;
    const auto put = [&s](std::uint64_t x) {
      while (x >= 0x80) {
        s.push_back(static_cast<char>((x & 0x7f) | 0x80));
        x >>= 7;
      }
      s.push_back(static_cast<char>(x));
    };
    const auto zz = [](std::int64_t x) { return static_cast<std::uint64_t>((x << 1) ^ (x >> 63)); };
    put(g.h.size());
    for (std::size_t j = 0; j < g.f.size(); ++j) {
      put(g.f[j].size());
      for (const auto& m : g.f[j]) {
        put(static_cast<std::uint64_t>(m.k));
        put(m.e);
      }
      if (j < g.h.size()) {
        put(static_cast<std::uint64_t>(g.h[j].i));
        put(g.h[j].w.tokens().size());
        for (auto a : g.h[j].w.tokens()) put(zz(a));
      }
    }
    return s;
  }

  GElement from_key(std::string_view s) const {
    std::size_t pos = 0;
    const auto get = [&]() {
      std::uint64_t x = 0;
      int shift = 0;
      for (;;) {
        const auto c = static_cast<unsigned char>(s.at(pos++));
        x |= static_cast<std::uint64_t>(c & 0x7f) << shift;
        if (!(c & 0x80)) return x;
        shift += 7;
      }
    };
    const auto unzz = [](std::uint64_t x) { return static_cast<std::int32_t>((x >> 1) ^ (~(x & 1) + 1)); };
    GElement g;
    const std::size_t n = get();
    g.f.assign(n + 1, FWord{});
    g.h.resize(n);
    for (std::size_t j = 0; j <= n; ++j) {
      const std::size_t fl = get();
      for (std::size_t r = 0; r < fl; ++r) {
        const int k = static_cast<int>(get());
        const auto e = static_cast<Element>(get());
        g.f[j].push_back({k, e});
      }
      if (j < n) {
        g.h[j].i = static_cast<int>(get());
        const std::size_t tl = get();
        std::vector<std::int32_t> toks(tl);
        for (auto& a : toks) a = unzz(get());
        g.h[j].w = HWord(std::move(toks));
      }
    }
    return g;
  }

  // -------------------------------------------------------------------------
  // Literals: M:k:idx, s:i, t:i, T:i (1-based k and i)

  GElement parse(const std::string& literal) const {
    std::istringstream in(literal);
    std::string tok;
    std::vector<Syllable> raw;
    while (in >> tok) {
      if (tok == "1") continue;
      const auto fail = [&] { throw Error(ErrorKind::kParse, "bad element token \"" + tok + "\""); };
      std::vector<std::string> parts;
      std::string part;
      std::istringstream ts(tok);
      while (std::getline(ts, part, ':')) parts.push_back(part);
      try {
        if (parts.size() == 3 && parts[0] == "M") {
          const int k = std::stoi(parts[1]) - 1;
          const long idx = std::stol(parts[2]);
          if (k < 0 || k >= member_count() || idx < 0 || static_cast<std::size_t>(idx) >= members_[k]->order())
            throw Error(ErrorKind::kParse, "element token out of range \"" + tok + "\"");
          raw.emplace_back(MSyl{k, static_cast<Element>(idx)});
        } else if (parts.size() == 2 && (parts[0] == "s" || parts[0] == "t" || parts[0] == "T")) {
          const int i = std::stoi(parts[1]) - 1;
          if (i < 0 || i >= branches_) throw Error(ErrorKind::kParse, "branch out of range \"" + tok + "\"");
          raw.emplace_back(HSyl{i, parts[0] == "s" ? HWord::sigma() : HWord::t(parts[0] == "t" ? 1 : -1)});
        } else {
          fail();
        }
      } catch (const std::invalid_argument&) {
        fail();
      } catch (const std::out_of_range&) {
        fail();
      }
    }
    return canonicalize(raw);
  }

  std::string format(const GElement& g) const {
    std::string out;
    for (const auto& l : letters(g)) {
      if (!out.empty()) out += ' ';
      switch (l.kind) {
        case Letter::Kind::kM: out += "M:" + std::to_string(l.index + 1) + ":" + std::to_string(l.element); break;
        case Letter::Kind::kSigma: out += "s:" + std::to_string(l.index + 1); break;
        case Letter::Kind::kT: out += "t:" + std::to_string(l.index + 1); break;
        case Letter::Kind::kTInv: out += "T:" + std::to_string(l.index + 1); break;
      }
    }
    return out.empty() ? "1" : out;
  }

 private:
  void check_m(const MSyl& s) const {
    if (s.k < 0 || s.k >= member_count())
      throw Error(ErrorKind::kInvalidArgument, "no member M_" + std::to_string(s.k + 1) + " in G");
    if (s.e >= members_[static_cast<std::size_t>(s.k)]->order())
      throw Error(ErrorKind::kInvalidArgument, "element " + std::to_string(s.e) + " outside M_" + std::to_string(s.k + 1));
  }
  void check_i(int i) const {
    if (i < 0 || i >= branches_) throw Error(ErrorKind::kInvalidArgument, "no branch H_" + std::to_string(i + 1));
  }

  std::vector<GroupPtr> members_;
  std::vector<int> m_;
  int branches_ = 0;
  std::map<std::int32_t, int> j_to_k_;  // mₖ ↦ k
  std::vector<std::vector<std::uint16_t>> lengths_;
  std::vector<int> diameters_;
};

// ---------------------------------------------------------------------------
// Randomized rewriting

/// Applies local moves in random order until none applies, then the
/// transversal normalization. The moves: drop identity syllables, merge
/// neighbours from the same factor, rewrite an H-syllable lying in the edge
/// group as M-syllables, merge Hᵢ F Hᵢ when F lies in Aᵢ, and absorb a
/// syllable σᵢ(k) into a neighbouring Hᵢ-syllable.
template <class Rng>
GElement canonicalize_random_schedule(const GGroup& G, std::vector<Syllable> w, Rng& rng) {
  const auto is_m = [](const Syllable& s) { return std::holds_alternative<MSyl>(s); };
  for (;;) {
    struct Move {
      int kind;
      std::size_t at, end;
    };
    std::vector<Move> moves;
    for (std::size_t p = 0; p < w.size(); ++p) {
      const auto& s = w[p];
      if (is_m(s)) {
        if (std::get<MSyl>(s).e == 0) moves.push_back({0, p, p});
      } else {
        const auto& b = std::get<HSyl>(s);
        if (b.w.is_identity()) moves.push_back({0, p, p});
        else if (G.h_in_edge(b.w, b.i, nullptr)) moves.push_back({2, p, p});
      }
      if (p + 1 < w.size()) {
        const auto& t = w[p + 1];
        if (is_m(s) && is_m(t) && std::get<MSyl>(s).k == std::get<MSyl>(t).k) moves.push_back({1, p, p + 1});
        if (!is_m(s) && !is_m(t) && std::get<HSyl>(s).i == std::get<HSyl>(t).i) moves.push_back({1, p, p + 1});
        if (is_m(s) != is_m(t)) {
          const auto& m = is_m(s) ? std::get<MSyl>(s) : std::get<MSyl>(t);
          const auto& b = is_m(s) ? std::get<HSyl>(t) : std::get<HSyl>(s);
          if (m.e == G.sigma_of(b.i, m.k)) moves.push_back({4, p, p + 1});
        }
      }
      if (!is_m(s)) {
        const int i = std::get<HSyl>(s).i;
        std::size_t q = p + 1;
        FWord mid;
        while (q < w.size() && is_m(w[q])) mid.push_back(std::get<MSyl>(w[q++]));
        if (q < w.size() && q > p + 1 && std::get<HSyl>(w[q]).i == i && G.f_in_edge(mid, i)) moves.push_back({3, p, q});
      }
    }
    if (moves.empty()) break;
    const Move mv = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
    std::vector<Syllable> repl;
    switch (mv.kind) {
      case 0: break;
      case 1:
        if (is_m(w[mv.at])) {
          const auto& a = std::get<MSyl>(w[mv.at]);
          const auto& b = std::get<MSyl>(w[mv.end]);
          repl.emplace_back(MSyl{a.k, G.member(a.k)->mul(a.e, b.e)});
        } else {
          const auto& a = std::get<HSyl>(w[mv.at]);
          const auto& b = std::get<HSyl>(w[mv.end]);
          repl.emplace_back(HSyl{a.i, a.w * b.w});
        }
        break;
      case 2: {
        const auto& b = std::get<HSyl>(w[mv.at]);
        FWord as_m;
        G.h_in_edge(b.w, b.i, &as_m);
        for (const auto& m : as_m) repl.emplace_back(m);
        break;
      }
      case 3: {
        const auto& a = std::get<HSyl>(w[mv.at]);
        const auto& b = std::get<HSyl>(w[mv.end]);
        FWord mid;
        for (std::size_t q = mv.at + 1; q < mv.end; ++q) mid.push_back(std::get<MSyl>(w[q]));
        repl.emplace_back(HSyl{a.i, a.w * G.f_to_h(mid, a.i) * b.w});
        break;
      }
      case 4: {
        if (is_m(w[mv.at])) {
          const auto& m = std::get<MSyl>(w[mv.at]);
          const auto& b = std::get<HSyl>(w[mv.end]);
          repl.emplace_back(HSyl{b.i, HWord::sigma_conj(G.m_of(m.k)) * b.w});
        } else {
          const auto& b = std::get<HSyl>(w[mv.at]);
          const auto& m = std::get<MSyl>(w[mv.end]);
          repl.emplace_back(HSyl{b.i, b.w * HWord::sigma_conj(G.m_of(m.k))});
        }
        break;
      }
    }
    w.erase(w.begin() + static_cast<std::ptrdiff_t>(mv.at), w.begin() + static_cast<std::ptrdiff_t>(mv.end) + 1);
    w.insert(w.begin() + static_cast<std::ptrdiff_t>(mv.at), repl.begin(), repl.end());
  }
  // The remaining word is reduced: group it into the alternating form directly.
  GElement g;
  for (const auto& s : w) {
    if (is_m(s)) {
      g.f.back().push_back(std::get<MSyl>(s));
    } else {
      g.h.push_back(std::get<HSyl>(s));
      g.f.emplace_back();
    }
  }
  G.normalize(g);
  return g;
}

/// Random raw syllable sequence for property tests.
template <class Rng>
std::vector<Syllable> random_syllables(const GGroup& G, Rng& rng, std::size_t count, int max_h_tokens = 5,
                                       int max_exponent = 3) {
  std::vector<Syllable> out;
  std::uniform_int_distribution<int> coin(0, 2);
  std::uniform_int_distribution<int> pick_k(0, G.member_count() - 1);
  std::uniform_int_distribution<int> pick_i(0, G.branches() - 1);
  for (std::size_t n = 0; n < count; ++n) {
    const int c = coin(rng);
    if (c == 0) {
      const int k = pick_k(rng);
      std::uniform_int_distribution<Element> pe(0, static_cast<Element>(G.member(k)->order() - 1));
      out.emplace_back(MSyl{k, pe(rng)});
    } else if (c == 1) {
      // Edge-group letters exercise the identifications.
      const int k = pick_k(rng);
      out.emplace_back(MSyl{k, G.sigma_of(pick_i(rng), k)});
    } else {
      const int i = pick_i(rng);
      std::vector<std::int32_t> toks;
      const int len = std::uniform_int_distribution<int>(1, max_h_tokens)(rng);
      for (int r = 0; r < len; ++r) {
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
          toks.push_back(0);
        } else {
          int a = std::uniform_int_distribution<int>(-max_exponent, max_exponent)(rng);
          if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
            const int k = pick_k(rng);
            a = (a >= 0 ? 1 : -1) * G.m_of(k);
          }
          toks.push_back(a);
        }
      }
      out.emplace_back(HSyl{i, HWord(std::move(toks))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ball enumeration

/// Level-synchronous breadth-first enumeration of the ball of radius r in the
/// Cayley graph of G over U ∪ U⁻¹, keyed by canonical forms. Enumeration stops
/// once state_cap states are held; every stored distance is exact.
class GBall {
 public:
  GBall(const GGroup& G, int radius, std::size_t state_cap = 10'000'000) : G_(&G), radius_(radius) {
    const auto moves = G.generator_moves();
    insert(G.key(G.identity()), 0);
    level_start_.push_back(0);
    complete_radius_ = 0;
    for (int r = 1; r <= radius && !truncated_; ++r) {
      const std::size_t begin = level_start_.back(), end = keys_.size();
      level_start_.push_back(end);
      for (std::size_t x = begin; x < end && !truncated_; ++x) {
        const GElement g = G.from_key(keys_[x]);
        for (const auto& u : moves) {
          std::string k = G.key(G.mul(g, u));
          if (index_.count(k)) continue;
          if (keys_.size() >= state_cap) {
            truncated_ = true;
            break;
          }
          insert(std::move(k), r);
        }
      }
      if (!truncated_) complete_radius_ = r;
    }
  }

  int radius() const { return radius_; }
  /// Largest r whose whole sphere is stored.
  int complete_radius() const { return complete_radius_; }
  bool truncated() const { return truncated_; }
  std::size_t size() const { return keys_.size(); }
  int distance_at(std::size_t idx) const { return dist_[idx]; }
  GElement element(std::size_t idx) const { return G_->from_key(keys_[idx]); }
  std::size_t level_size(int r) const {
    if (static_cast<std::size_t>(r) >= level_start_.size()) return 0;
    const std::size_t end = static_cast<std::size_t>(r) + 1 < level_start_.size() ? level_start_[r + 1] : keys_.size();
    return end - level_start_[r];
  }
  /// Number of stored elements with |g| ≤ r.
  std::size_t count_within(int r) const {
    std::size_t n = 0;
    for (int s = 0; s <= r; ++s) n += level_size(s);
    return n;
  }

  /// Exact |g|_G when g is stored.
  std::optional<int> length(const GElement& g) const {
    auto it = index_.find(G_->key(g));
    if (it == index_.end()) return std::nullopt;
    return dist_[it->second];
  }

 private:
  void insert(std::string k, int d) {
    keys_.push_back(std::move(k));
    index_.emplace(keys_.back(), static_cast<std::uint32_t>(keys_.size() - 1));
    dist_.push_back(static_cast<std::uint8_t>(d));
  }

  const GGroup* G_;
  int radius_;
  int complete_radius_ = 0;
  bool truncated_ = false;
  std::deque<std::string> keys_;
  std::unordered_map<std::string_view, std::uint32_t> index_;
  std::vector<std::uint8_t> dist_;
  std::vector<std::size_t> level_start_;
};

/// Exact |g|_G when |g|_G ≤ radius_cap, else nullopt. Runs breadth-first
/// search from the identity and from g at once (right multiplication by
/// U ∪ U⁻¹ on both sides), always finishing whole levels, so the first level
/// that meets yields the exact length.
inline std::optional<int> bfs_length_oracle(const GGroup& G, const GElement& g, int radius_cap,
                                            std::size_t state_cap = 10'000'000) {
  if (g.is_identity()) return 0;
  const auto moves = G.generator_moves();
  struct Side {
    std::unordered_map<std::string, int> seen;
    std::vector<std::string> frontier;
    int depth = 0;
  };
  Side a, b;
  a.frontier.push_back(G.key(G.identity()));
  b.frontier.push_back(G.key(g));
  a.seen.emplace(a.frontier.front(), 0);
  b.seen.emplace(b.frontier.front(), 0);
  while (a.depth + b.depth < radius_cap) {
    Side& s = a.frontier.size() <= b.frontier.size() ? a : b;
    Side& o = &s == &a ? b : a;
    if (s.frontier.empty()) return std::nullopt;
    std::vector<std::string> next;
    int best = std::numeric_limits<int>::max();
    for (const auto& k : s.frontier) {
      const GElement x = G.from_key(k);
      for (const auto& u : moves) {
        std::string y = G.key(G.mul(x, u));
        if (auto it = o.seen.find(y); it != o.seen.end()) best = std::min(best, s.depth + 1 + it->second);
        if (s.seen.emplace(y, s.depth + 1).second) {
          if (a.seen.size() + b.seen.size() > state_cap)
            throw Error(ErrorKind::kBudget, "BFS state cap of " + std::to_string(state_cap) + " exceeded");
          next.push_back(std::move(y));
        }
      }
    }
    ++s.depth;
    s.frontier.swap(next);
    if (best <= radius_cap) return best;
    if (best != std::numeric_limits<int>::max()) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace cgap
