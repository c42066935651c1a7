#ifndef PVTESS_PREDICATES_HPP
#define PVTESS_PREDICATES_HPP

// Orientation and incircle predicates with static floating-point filters and
// an exact rational fallback. The filter error bounds follow Shewchuk's
// classic constants; whenever the filtered value is too close to zero the
// sign is recomputed in exact arithmetic, so callers may rely on signs.

#include <boost/multiprecision/cpp_int.hpp>

#include "pvtess/geometry.hpp"

namespace pvtess {

namespace detail {

using bigq = boost::multiprecision::cpp_rational;

inline constexpr double kEps = 0x1.0p-53;
inline constexpr double kCcwBoundA = (3.0 + 16.0 * kEps) * kEps;
inline constexpr double kIncBoundA = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(const bigq& v) {
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

inline int orient2d_exact(Point a, Point b, Point c) {
  bigq ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  return sign_of((ax - cx) * (by - cy) - (ay - cy) * (bx - cx));
}

inline int incircle_exact(Point a, Point b, Point c, Point d) {
  bigq adx = bigq(a.x) - bigq(d.x), ady = bigq(a.y) - bigq(d.y);
  bigq bdx = bigq(b.x) - bigq(d.x), bdy = bigq(b.y) - bigq(d.y);
  bigq cdx = bigq(c.x) - bigq(d.x), cdy = bigq(c.y) - bigq(d.y);
  bigq alift = adx * adx + ady * ady;
  bigq blift = bdx * bdx + bdy * bdy;
  bigq clift = cdx * cdx + cdy * cdy;
  bigq det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
             clift * (adx * bdy - ady * bdx);
  return sign_of(det);
}

}  // namespace detail

// Sign of the signed parallelogram area of (a,b,c): positive when the triple
// turns counterclockwise, zero when exactly collinear.
inline int orient2d(Point a, Point b, Point c) {
  double detleft = (a.x - c.x) * (b.y - c.y);
  double detright = (a.y - c.y) * (b.x - c.x);
  double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
  }
  if (std::fabs(det) >= detail::kCcwBoundA * detsum)
    return det > 0.0 ? 1 : -1;
  return detail::orient2d_exact(a, b, c);
}

// Sign of the incircle determinant: positive when d lies strictly inside the
// circle through counterclockwise (a,b,c), zero when exactly cocircular.
inline int incircle(Point a, Point b, Point c, Point d) {
  double adx = a.x - d.x, ady = a.y - d.y;
  double bdx = b.x - d.x, bdy = b.y - d.y;
  double cdx = c.x - d.x, cdy = c.y - d.y;

  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double alift = adx * adx + ady * ady;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double blift = bdx * bdx + bdy * bdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double clift = cdx * cdx + cdy * cdy;

  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
               clift * (adxbdy - bdxady);
  double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                     (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                     (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
  if (std::fabs(det) > detail::kIncBoundA * permanent)
    return det > 0.0 ? 1 : -1;
  return detail::incircle_exact(a, b, c, d);
}

}  // namespace pvtess

#endif  // PVTESS_PREDICATES_HPP
