#pragma once

#include <map>
#include <sstream>
#include <string>

#include "symspace.hpp"

namespace sl2 {

// Exhaustive size and intersection data for one finite scope.
struct GroupCensus {
  FieldRef field;
  InvolutionSpec inv;
  std::map<std::string, long long> sizes;
  std::map<std::string, long long> intersection_sizes;
  std::vector<std::pair<std::string, long long>> orbit_partition;  // (representative, size)
  bool orbit_cover = false;
  bool orbit_cover_meaningful = false;
};

namespace detail {

struct ScopeData {
  FieldRef f;
  InvolutionSpec inv;
  std::vector<Mat2> G, H, Qt, U;
  MatKeySet Gk, Hk, Qtk, Uk;
};

inline ScopeData collect_scope(const FieldRef& f, const InvolutionSpec& inv) {
  ScopeData s{f, inv, {}, {}, {}, {}, {}, {}, {}, {}};
  enumerate_sl2(f, [&](const Mat2& g) {
    s.G.push_back(g);
    if (in_fixed_group(inv, g)) s.H.push_back(g);
    if (in_extended_symmetric(inv, g)) s.Qt.push_back(g);
    if (in_unipotent(g)) s.U.push_back(g);
  });
  s.Gk = keys_of(s.G);
  s.Hk = keys_of(s.H);
  s.Qtk = keys_of(s.Qt);
  s.Uk = keys_of(s.U);
  return s;
}

// Split semisimple members of the extended symmetric space: eigenvalues in k.
inline bool is_split_torus_member(const Mat2& q) {
  if (is_scalar(q)) return true;
  Elem disc = char_poly_disc(q);
  if (disc.is_zero()) return false;
  return is_square(disc);
}

// The k-points of the maximal torus through a non-central semisimple element:
// the determinant-1 part of the commutative algebra k[q].
inline std::vector<Mat2> torus_through(const Mat2& q) {
  const FieldRef& f = q.field();
  std::vector<Mat2> out;
  for (const Elem& c0 : field_elements(f)) {
    for (const Elem& c1 : field_elements(f)) {
      Mat2 x = Mat2::make(add(c0, mul(c1, q.e11)), mul(c1, q.e12), mul(c1, q.e21),
                          add(c0, mul(c1, q.e22)));
      if (is_sl2(x)) out.push_back(x);
    }
  }
  return out;
}

}  // namespace detail

inline GroupCensus census_report(const FieldRef& f, const InvolutionSpec& inv) {
  require(is_finite_field(f), Err::BadParameter, "census needs a finite field");
  detail::ScopeData s = detail::collect_scope(f, inv);
  GroupCensus out{f, inv, {}, {}, {}, false, false};
  unsigned long long q = field_size(f);

  MatKeySet q_image;
  long long torus = 0, borel = 0;
  for (const Mat2& g : s.G) {
    q_image.insert(mat_key(g * inverse(apply(inv, g))));
    if (in_torus(g)) ++torus;
    if (g.e21.is_zero()) ++borel;
  }
  out.sizes["|B|"] = borel;
  out.sizes["|G|"] = static_cast<long long>(s.G.size());
  out.sizes["|H|"] = static_cast<long long>(s.H.size());
  out.sizes["|Q|"] = static_cast<long long>(q_image.size());
  out.sizes["|Qt|"] = static_cast<long long>(s.Qt.size());
  out.sizes["|T|"] = torus;
  out.sizes["|U|"] = static_cast<long long>(s.U.size());
  require(out.sizes["|G|"] == static_cast<long long>(q * q * q - q), Err::PostconditionViolation,
          "group size mismatch");

  auto count_common = [](const std::vector<Mat2>& v, const MatKeySet& ks) {
    long long n = 0;
    for (const Mat2& m : v)
      if (ks.count(mat_key(m))) ++n;
    return n;
  };
  out.intersection_sizes["H&Qt"] = count_common(s.H, s.Qtk);
  out.intersection_sizes["U&H"] = count_common(s.U, s.Hk);
  out.intersection_sizes["U&Qt"] = count_common(s.U, s.Qtk);

  if (inv.kind == InvKind::TauM) {
    MatKeySet HQt = product_set(s.H, s.Qt);
    MatKeySet QtU = product_set(s.Qt, s.U);
    MatKeySet HU = product_set(s.H, s.U);
    long long hqt_u = 0;
    for (const Mat2& u : s.U)
      if (HQt.count(mat_key(u))) ++hqt_u;
    long long h_qtu = 0;
    for (const Mat2& h : s.H)
      if (QtU.count(mat_key(h))) ++h_qtu;
    long long hu_qt = 0;
    for (const Mat2& g : s.Qt)
      if (HU.count(mat_key(g))) ++hu_qt;
    out.intersection_sizes["HQt&U"] = hqt_u;
    out.intersection_sizes["H&QtU"] = h_qtu;
    out.intersection_sizes["HU&Qt"] = hu_qt;

    // Parameter-pair count over the fixed group versus distinct matrices.
    long long pairs_nonzero_corner = 0;
    for (const Mat2& h : s.H)
      if (!h.e11.is_zero()) ++pairs_nonzero_corner;
    out.intersection_sizes["HQt&U parameter pairs"] = pairs_nonzero_corner;
    bool neg_m_square = is_square(neg(inv.m));
    out.intersection_sizes["|H| - #{b: -m b^2 = 1}"] =
        static_cast<long long>(s.H.size()) - (neg_m_square ? 2 : 0);

    // Orbit partition of torus members under fixed-group conjugation: every
    // element of the extended space is semisimple here and the whole maximal
    // torus through it is tau-split, so the conjugation orbits tile the space.
    bool m_square = is_square(inv.m);
    out.orbit_cover_meaningful = !m_square;
    if (!m_square) {
      MatKeySet covered;
      bool all_torus_members = true;
      for (const Mat2& t : s.Qt) {
        if (covered.count(mat_key(t))) continue;
        if (!is_semisimple(t)) {
          all_torus_members = false;
          continue;
        }
        if (!is_scalar(t)) {
          for (const Mat2& a : detail::torus_through(t)) {
            if (!in_extended_symmetric(inv, a)) all_torus_members = false;
          }
        }
        MatKeySet orbit;
        for (const Mat2& h : s.H) orbit.insert(mat_key(h * t * inverse(h)));
        for (unsigned long long k : orbit) covered.insert(k);
        std::string rep = mat_to_string(t);
        if (!detail::is_split_torus_member(t)) rep += " (anisotropic torus)";
        out.orbit_partition.emplace_back(rep, static_cast<long long>(orbit.size()));
      }
      out.orbit_cover = all_torus_members && covered.size() == s.Qt.size();
    }
  }
  return out;
}

inline std::string census_to_string(const GroupCensus& c) {
  std::ostringstream os;
  os << "census field=" << field_to_string(c.field) << " inv=" << involution_to_string(c.inv) << "\n";
  os << "sizes:\n";
  for (const auto& [k, v] : c.sizes) os << "  " << k << " = " << v << "\n";
  if (!c.intersection_sizes.empty()) {
    os << "intersections:\n";
    for (const auto& [k, v] : c.intersection_sizes) os << "  " << k << " = " << v << "\n";
  }
  if (c.orbit_cover_meaningful) {
    os << "torus orbit partition (" << (c.orbit_cover ? "covers" : "DOES NOT COVER")
       << " the extended symmetric space):\n";
    for (const auto& [rep, size] : c.orbit_partition) os << "  rep " << rep << " : orbit size " << size << "\n";
  }
  return os.str();
}

}  // namespace sl2
