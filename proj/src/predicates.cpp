#include "deq/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace deq::predicates {

namespace {

// Error-free transformations (Knuth two-sum, fma-based two-product).
inline void two_sum(double a, double b, double& s, double& e)
{
    s = a + b;
    const double bv = s - a;
    const double av = s - bv;
    e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e)
{
    p = a * b;
    e = std::fma(a, b, -p);
}

/// Non-overlapping expansion, components in increasing magnitude, zeros removed.
class Expansion {
public:
    Expansion() = default;
    explicit Expansion(double v)
    {
        if (v != 0.0) c_.push_back(v);
    }

    static Expansion difference(double a, double b)
    {
        double s = 0.0, e = 0.0;
        two_sum(a, -b, s, e);
        Expansion out;
        if (e != 0.0) out.c_.push_back(e);
        if (s != 0.0) out.c_.push_back(s);
        return out;
    }

    Expansion& grow(double b)
    {
        std::vector<double> out;
        out.reserve(c_.size() + 1);
        double q = b;
        for (double e : c_) {
            double s = 0.0, err = 0.0;
            two_sum(q, e, s, err);
            if (err != 0.0) out.push_back(err);
            q = s;
        }
        if (q != 0.0) out.push_back(q);
        c_ = std::move(out);
        return *this;
    }

    Expansion operator+(const Expansion& other) const
    {
        Expansion out = *this;
        for (double v : other.c_) out.grow(v);
        return out;
    }

    Expansion operator-() const
    {
        Expansion out = *this;
        for (double& v : out.c_) v = -v;
        return out;
    }

    Expansion operator-(const Expansion& other) const { return *this + (-other); }

    Expansion scale(double b) const
    {
        Expansion out;
        for (double e : c_) {
            double p = 0.0, err = 0.0;
            two_product(e, b, p, err);
            out.grow(err);
            out.grow(p);
        }
        return out;
    }

    Expansion operator*(const Expansion& other) const
    {
        Expansion out;
        for (double v : other.c_) out = out + scale(v);
        return out;
    }

    int sign() const
    {
        if (c_.empty()) return 0;
        return c_.back() > 0.0 ? 1 : -1;
    }

    double estimate() const
    {
        double s = 0.0;
        for (double v : c_) s += v;
        return s;
    }

private:
    std::vector<double> c_;
};

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5; // 2^-53
constexpr double kCcwBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccBound = (10.0 + 96.0 * kEps) * kEps;

// Exact sign, approximate magnitude.
double signed_magnitude(const Expansion& det)
{
    const int s = det.sign();
    return s * std::max(std::abs(det.estimate()), std::numeric_limits<double>::min());
}

double orient_exact(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const Expansion acx = Expansion::difference(a.x(), c.x());
    const Expansion acy = Expansion::difference(a.y(), c.y());
    const Expansion bcx = Expansion::difference(b.x(), c.x());
    const Expansion bcy = Expansion::difference(b.y(), c.y());
    const Expansion det = acx * bcy - acy * bcx;
    return signed_magnitude(det);
}

double incircle_exact(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const Expansion adx = Expansion::difference(a.x(), d.x());
    const Expansion ady = Expansion::difference(a.y(), d.y());
    const Expansion bdx = Expansion::difference(b.x(), d.x());
    const Expansion bdy = Expansion::difference(b.y(), d.y());
    const Expansion cdx = Expansion::difference(c.x(), d.x());
    const Expansion cdy = Expansion::difference(c.y(), d.y());

    const Expansion alift = adx * adx + ady * ady;
    const Expansion blift = bdx * bdx + bdy * bdy;
    const Expansion clift = cdx * cdx + cdy * cdy;

    const Expansion det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                          clift * (adx * bdy - bdx * ady);
    return signed_magnitude(det);
}

} // namespace

double orient2d(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double detleft = (a.x() - c.x()) * (b.y() - c.y());
    const double detright = (a.y() - c.y()) * (b.x() - c.x());
    const double det = detleft - detright;
    const double detsum = std::abs(detleft) + std::abs(detright);
    if (std::abs(det) > kCcwBound * detsum) return det;
    return orient_exact(a, b, c);
}

double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    if (std::abs(det) > kIccBound * permanent) return det;
    return incircle_exact(a, b, c, d);
}

int orient_sign(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double o = orient2d(a, b, c);
    return (o > 0.0) - (o < 0.0);
}

int incircle_sign(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double o = incircle(a, b, c, d);
    return (o > 0.0) - (o < 0.0);
}

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const int o1 = orient_sign(a, b, c);
    const int o2 = orient_sign(a, b, d);
    const int o3 = orient_sign(c, d, a);
    const int o4 = orient_sign(c, d, b);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
               std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
    };
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace deq::predicates
