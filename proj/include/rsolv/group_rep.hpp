#pragma once

// A group handed to the amalgam engine: either a finite table group or a
// finitely generated abelian group. Elements share one encoding, a vector of
// 64-bit integers: {index} for table groups, coordinates for abelian groups.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rsolv/finite_group.hpp"
#include "rsolv/integer_lattice.hpp"

namespace rsolv {

using Element = IntVector;

class GroupRep {
 public:
  GroupRep(GroupPtr g) : rep_(std::move(g)) {}  // NOLINT(implicit)
  GroupRep(FGAbelian a) : rep_(std::move(a)) {}  // NOLINT(implicit)

  bool is_finite_group() const noexcept { return std::holds_alternative<GroupPtr>(rep_); }
  bool is_abelian_group() const noexcept { return !is_finite_group(); }
  GroupPtr const& finite() const { return std::get<GroupPtr>(rep_); }
  FGAbelian const& abelian() const { return std::get<FGAbelian>(rep_); }

  static Element of(Index i) { return {static_cast<std::int64_t>(i)}; }
  static Index index(Element const& x) { return static_cast<Index>(x.at(0)); }

  Element identity() const {
    return is_finite_group() ? of(finite()->identity()) : abelian().zero();
  }

  bool contains(Element const& x) const {
    if (is_finite_group()) return x.size() == 1 && x[0] >= 0 && x[0] < static_cast<std::int64_t>(finite()->order());
    return abelian().contains(x);
  }

  void check(Element const& x) const {
    if (!contains(x)) fail(ErrorKind::ElementOutOfRange, "element " + vector_label(x) + " not in " + describe());
  }

  Element mul(Element const& a, Element const& b) const {
    if (is_finite_group()) return of(finite()->mul(index(a), index(b)));
    return abelian().add(a, b);
  }

  Element inv(Element const& a) const {
    if (is_finite_group()) return of(finite()->inv(index(a)));
    return abelian().negate(a);
  }

  Element power(Element const& a, std::int64_t k) const {
    if (is_finite_group()) return of(finite()->power(index(a), k));
    return abelian().scale(a, k);
  }

  bool is_identity(Element const& a) const { return a == identity(); }

  // nullopt for infinite groups
  std::optional<std::size_t> order() const {
    if (is_finite_group()) return finite()->order();
    if (!abelian().is_finite()) return std::nullopt;
    std::size_t n = 1;
    for (auto d : abelian().torsion) n *= static_cast<std::size_t>(d);
    return n;
  }

  std::string label(Element const& x) const {
    if (is_finite_group()) return finite()->label(index(x));
    return vector_label(x);
  }

  std::string describe() const {
    if (is_finite_group()) return "finite group of order " + std::to_string(finite()->order());
    return abelian().describe();
  }

  // Every element of a finite representation, in index / mixed-radix order.
  std::vector<Element> enumerate(std::size_t cap = 5000) const {
    auto n = order();
    if (!n || *n > cap) fail(ErrorKind::ClosureCapExceeded, "cannot enumerate " + describe());
    std::vector<Element> out;
    if (is_finite_group()) {
      for (Index i = 0; i < *n; ++i) out.push_back(of(i));
      return out;
    }
    Element x = abelian().zero();
    for (std::size_t k = 0; k < *n; ++k) {
      out.push_back(x);
      for (std::size_t i = x.size(); i-- > 0;) {
        if (++x[i] < abelian().modulus(i)) break;
        x[i] = 0;
      }
    }
    return out;
  }

  // Generators in the order used for generator-image maps: table generators,
  // or the standard basis of the abelian group.
  std::vector<Element> generators() const {
    std::vector<Element> out;
    if (is_finite_group()) {
      for (auto g : finite()->generators()) out.push_back(of(g));
    } else {
      for (std::size_t i = 0; i < abelian().width(); ++i) out.push_back(abelian().basis(i));
    }
    return out;
  }

  friend bool same_group(GroupRep const& a, GroupRep const& b) {
    if (a.is_finite_group() != b.is_finite_group()) return false;
    if (a.is_finite_group()) return a.finite() == b.finite() || same_table(*a.finite(), *b.finite());
    return a.abelian() == b.abelian();
  }

 private:
  std::variant<GroupPtr, FGAbelian> rep_;
};

// A verified homomorphism between group representations. Finite sources keep
// the full image table (verified on all pairs); abelian sources keep the
// images of the standard basis (verified on commutation and torsion
// relations).
class RepHom {
 public:
  static RepHom from_generator_images(GroupRep source, GroupRep target,
                                      std::vector<Element> const& images) {
    auto gens = source.generators();
    if (images.size() != gens.size()) {
      fail(ErrorKind::NotAHomomorphism, "expected " + std::to_string(gens.size()) +
                                            " generator images, got " +
                                            std::to_string(images.size()));
    }
    for (auto const& y : images) target.check(y);
    RepHom h(std::move(source), std::move(target));
    if (h.source_.is_finite_group()) {
      FiniteGroup const& S = *h.source_.finite();
      h.table_.assign(S.order(), h.target_.identity());
      std::vector<bool> seen(S.order(), false);
      std::vector<Index> queue{S.identity()};
      seen[S.identity()] = true;
      for (std::size_t i = 0; i < queue.size(); ++i)
        for (std::size_t k = 0; k < images.size(); ++k) {
          Index y = S.mul(queue[i], S.generators()[k]);
          if (!seen[y]) {
            seen[y] = true;
            h.table_[y] = h.target_.mul(h.table_[queue[i]], images[k]);
            queue.push_back(y);
          }
        }
      for (Index x = 0; x < S.order(); ++x)
        for (Index y = 0; y < S.order(); ++y)
          if (h.table_[S.mul(x, y)] != h.target_.mul(h.table_[x], h.table_[y])) {
            fail(ErrorKind::NotAHomomorphism, "generator images do not extend to a homomorphism");
          }
    } else {
      FGAbelian const& A = h.source_.abelian();
      for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
          if (h.target_.mul(images[i], images[j]) != h.target_.mul(images[j], images[i])) {
            fail(ErrorKind::NotAHomomorphism, "images of abelian generators do not commute");
          }
      for (std::size_t i = A.free_rank; i < A.width(); ++i)
        if (!h.target_.is_identity(h.target_.power(images[i], A.modulus(i)))) {
          fail(ErrorKind::NotAHomomorphism, "torsion relation of generator " +
                                                std::to_string(i + 1) + " not preserved");
        }
      h.basis_images_ = images;
    }
    return h;
  }

  static RepHom from_finite(FiniteHom const& f) {
    RepHom h(GroupRep(f.source()), GroupRep(f.target()));
    for (auto y : f.images()) h.table_.push_back(GroupRep::of(y));
    return h;
  }

  GroupRep const& source() const noexcept { return source_; }
  GroupRep const& target() const noexcept { return target_; }

  Element operator()(Element const& x) const {
    if (source_.is_finite_group()) return table_.at(GroupRep::index(x));
    Element r = target_.identity();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) r = target_.mul(r, target_.power(basis_images_[i], x[i]));
    return r;
  }

  FiniteHom to_finite() const {
    if (!source_.is_finite_group() || !target_.is_finite_group()) {
      fail(ErrorKind::InvalidArgument, "not a map between finite table groups");
    }
    std::vector<Index> imgs;
    for (auto const& y : table_) imgs.push_back(GroupRep::index(y));
    return FiniteHom(source_.finite(), target_.finite(), std::move(imgs));
  }

  bool is_injective(std::size_t cap = 5000) const {
    if (source_.order()) {
      std::set<Element> seen;
      for (auto const& x : source_.enumerate(cap))
        if (!seen.insert((*this)(x)).second) return false;
      return true;
    }
    // infinite abelian source: only abelian targets can receive it injectively
    if (!target_.is_abelian_group()) return false;
    FGAbelian const& A = source_.abelian();
    FGAbelian const& B = target_.abelian();
    // x in ker iff Phi x lies in the span of the target torsion relations
    std::size_t sw = A.width(), tw = B.width();
    IntMatrix M(tw, sw + B.torsion.size());
    for (std::size_t j = 0; j < sw; ++j)
      for (std::size_t i = 0; i < tw; ++i) M(i, j) = basis_images_[j][i];
    for (std::size_t t = 0; t < B.torsion.size(); ++t) M(B.free_rank + t, sw + t) = B.torsion[t];
    IntMatrix K = integer_kernel(M);
    for (std::size_t c = 0; c < K.cols(); ++c)
      for (std::size_t i = 0; i < sw; ++i) {
        auto m = A.modulus(i);
        if (m == 0 ? K(i, c) != 0 : K(i, c) % m != 0) return false;
      }
    return true;
  }

 private:
  RepHom(GroupRep s, GroupRep t) : source_(std::move(s)), target_(std::move(t)) {}

  GroupRep source_;
  GroupRep target_;
  std::vector<Element> table_;
  std::vector<Element> basis_images_;
};

}  // namespace rsolv
