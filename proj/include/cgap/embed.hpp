#pragma once

// Hilbert-space embeddings ψ and π of G over sparse vectors.
//
// A coordinate key is the letter prefix g[1..j] of the extended normal form
// together with a basis slot; keys with different prefixes are orthogonal.
// M-letters s ∈ Mₖ map to μₖ·δ_s, H-letters use σᵢ ↦ e₁, tᵢ ↦ e₂, tᵢ⁻¹ ↦ −e₂.

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cgap/error.hpp"
#include "cgap/ggroup.hpp"

namespace cgap {

struct HilbertKey {
  std::string prefix;  // packed letters g[1..j]
  std::uint64_t slot = 0;
  auto operator<=>(const HilbertKey&) const = default;
};

class SparseHilbertVector {
 public:
  void add(const HilbertKey& key, double c) {
    if (c == 0) return;
    entries_[key] += c;
  }
  const std::map<HilbertKey, double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  double norm2() const {
    double s = 0;
    for (const auto& [k, c] : entries_) s += c * c;
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  /// ‖a − b‖ by a merge over sorted keys.
  friend double distance(const SparseHilbertVector& a, const SparseHilbertVector& b) {
    auto i = a.entries_.begin(), j = b.entries_.begin();
    double s = 0;
    while (i != a.entries_.end() || j != b.entries_.end()) {
      double d;
      if (j == b.entries_.end() || (i != a.entries_.end() && i->first < j->first)) {
        d = (i++)->second;
      } else if (i == a.entries_.end() || j->first < i->first) {
        d = -(j++)->second;
      } else {
        d = (i++)->second - (j++)->second;
      }
      s += d * d;
    }
    return std::sqrt(s);
  }

 private:
  std::map<HilbertKey, double> entries_;
};

namespace detail {

inline void pack_letter(std::string& s, const Letter& l) {
  s.push_back(static_cast<char>(l.kind));
  for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((static_cast<std::uint32_t>(l.index) >> (8 * b)) & 0xff));
  if (l.kind == Letter::Kind::kM)
    for (int b = 0; b < 4; ++b) s.push_back(static_cast<char>((l.element >> (8 * b)) & 0xff));
}

}  // namespace detail

/// Letter embedding φ: slot and signed coefficient of the single basis vector.
inline std::pair<std::uint64_t, double> letter_embedding(const GGroup& G, const Letter& l) {
  switch (l.kind) {
    case Letter::Kind::kM: return {l.element, static_cast<double>(G.mu_of(l.index))};
    case Letter::Kind::kSigma: return {0, 1.0};
    case Letter::Kind::kT: return {1, 1.0};
    case Letter::Kind::kTInv: return {1, -1.0};
  }
  return {0, 0.0};
}

inline double letter_norm(const GGroup& G, const Letter& l) { return std::abs(letter_embedding(G, l).second); }

enum class EmbeddingKind { kPsi, kPi };

/// κⱼ = √wt(ḡⱼ) / (ln(wt(ḡⱼ)+1)·√wt(g[j])), ḡⱼ the suffix g[j..].
inline std::vector<double> pi_coefficients(const GGroup& G, const std::vector<Letter>& w) {
  std::vector<double> kappa(w.size());
  double suffix = 0;
  for (std::size_t j = w.size(); j-- > 0;) {
    const double wl = static_cast<double>(G.letter_weight(w[j]));
    suffix += wl;
    kappa[j] = std::sqrt(suffix) / (std::log(suffix + 1.0) * std::sqrt(wl));
  }
  return kappa;
}

inline SparseHilbertVector embed_letters(const GGroup& G, const std::vector<Letter>& w, EmbeddingKind kind) {
  SparseHilbertVector v;
  const std::vector<double> kappa = kind == EmbeddingKind::kPi ? pi_coefficients(G, w) : std::vector<double>();
  std::string prefix;
  for (std::size_t j = 0; j < w.size(); ++j) {
    detail::pack_letter(prefix, w[j]);
    const auto [slot, c] = letter_embedding(G, w[j]);
    v.add({prefix, slot}, kind == EmbeddingKind::kPi ? kappa[j] * c : c);
  }
  return v;
}

inline SparseHilbertVector psi(const GGroup& G, const GElement& g) {
  return embed_letters(G, G.letters(g), EmbeddingKind::kPsi);
}
inline SparseHilbertVector pi(const GGroup& G, const GElement& g) {
  return embed_letters(G, G.letters(g), EmbeddingKind::kPi);
}

inline double embed_distance(const GGroup& G, EmbeddingKind kind, const GElement& g, const GElement& h) {
  return distance(embed_letters(G, G.letters(g), kind), embed_letters(G, G.letters(h), kind));
}

/// ‖ψ(g)−ψ(h)‖² from the prefix decomposition: the two diverging letters and
/// both tails, all mutually orthogonal.
inline double psi_distance2_closed_form(const GGroup& G, const GElement& g, const GElement& h) {
  const auto d = G.prefix_decompose(g, h);
  double s = 0;
  const auto add = [&](const Letter& l) { s += std::pow(letter_norm(G, l), 2); };
  if (d.f_gh) add(*d.f_gh);
  if (d.f_hg) add(*d.f_hg);
  for (const auto& l : d.q_gh) add(l);
  for (const auto& l : d.q_hg) add(l);
  return s;
}

// ---------------------------------------------------------------------------
// Auxiliary inequalities

struct AuxReport {
  std::size_t sequences = 0;
  std::size_t new_violations = 0;
  std::size_t lemineq_violations = 0;
  double max_new_ratio = 0;   // LHS/RHS of the suffix-sum inequality
  double max_lemineq = 0;     // largest Σ aₖ/(sₖ ln²(sₖ+1))
  double ceiling = 10;
  bool pass() const { return new_violations == 0 && lemineq_violations == 0; }
};

/// Σᵢ (Σ_{r≥i} a_r) aᵢ and (Σ aᵢ)².
inline std::pair<double, double> suffix_product_sides(const std::vector<double>& a) {
  double total = 0;
  for (double x : a) total += x;
  double lhs = 0, suffix = total;
  for (double x : a) {
    lhs += suffix * x;
    suffix -= x;
  }
  return {lhs, total * total};
}

/// Σₖ aₖ/(sₖ ln²(sₖ+1)) with sₖ = aₖ + … + aₙ.
inline double lemineq_sum(const std::vector<double>& a) {
  double s = 0, out = 0;
  for (std::size_t k = a.size(); k-- > 0;) {
    s += a[k];
    const double l = std::log(s + 1.0);
    out += a[k] / (s * l * l);
  }
  return out;
}

inline AuxReport verify_aux_inequalities(const std::vector<std::vector<double>>& samples, double ceiling = 10) {
  AuxReport r;
  r.ceiling = ceiling;
  for (const auto& a : samples) {
    if (a.empty()) throw Error(ErrorKind::kInvalidArgument, "empty sequence");
    for (double x : a)
      if (!(x > 0)) throw Error(ErrorKind::kDomain, "sequence entries must be positive");
    if (a.back() < 1) throw Error(ErrorKind::kDomain, "last entry must be at least 1");
    ++r.sequences;
    const auto [lhs, rhs] = suffix_product_sides(a);
    r.max_new_ratio = std::max(r.max_new_ratio, lhs / rhs);
    if (lhs > rhs * (1 + 1e-12)) ++r.new_violations;
    const double s = lemineq_sum(a);
    r.max_lemineq = std::max(r.max_lemineq, s);
    if (!(s < ceiling)) ++r.lemineq_violations;
  }
  return r;
}

}  // namespace cgap
