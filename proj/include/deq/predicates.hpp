#pragma once

// Robust geometric predicates: a floating-point filter backed by exact
// expansion arithmetic when the filter cannot certify the sign.

#include "deq/mesh.hpp"

namespace deq::predicates {

/// Positive if a, b, c are in counter-clockwise order, negative if clockwise,
/// zero if collinear. The sign is exact.
double orient2d(const Vec2& a, const Vec2& b, const Vec2& c);

/// Positive if d lies inside the circle through a, b, c (given CCW), negative
/// outside, zero on it. The sign is exact.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// Sign helpers returning -1, 0 or +1.
int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c);
int incircle_sign(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

/// True if closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

} // namespace deq::predicates
