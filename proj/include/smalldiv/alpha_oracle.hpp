#ifndef SMALLDIV_ALPHA_ORACLE_HPP
#define SMALLDIV_ALPHA_ORACLE_HPP

#include <smalldiv/cf.hpp>
#include <smalldiv/interval.hpp>

#include <cstdint>
#include <optional>

namespace smalldiv {

// Certified evaluation of ||n*alpha||_Z and of signed fractional parts
// against rational thresholds, with automatic refinement for
// enclosure-backed inputs.  Exact backends compare in their field; nothing
// is ever decided by a float.
class DistOracle {
  public:
    explicit DistOracle(const ContinuedFractionTable& t) : t_(t) {
        if (auto* r = std::get_if<Rat>(&t.x[0])) {
            xr_ = *r;
        } else if (auto* s = std::get_if<QuadRat>(&t.x[0])) {
            xs_ = *s;
        } else {
            bits_ = t.cert_bits;
            enc_ = refine(bits_);
        }
    }

    // certified enclosure of ||n alpha||, intersected with [0, 1/2]
    RatInterval dist_enclosure(int64_t n, unsigned bits) {
        if (n == 0) return RatInterval(Rat(0));
        if (xr_) {
            Rat y = Rat(*xr_) * Rat(Int(n));
            Int m = rat_round(y);
            return RatInterval(Rat(abs(y - Rat(m))));
        }
        if (xs_) {
            QuadRat y = *xs_ * Rat(Int(n));
            Int m = (y + Rat(1, 2)).floor();
            QuadRat dv = y - Rat(m);
            if (dv.sign() < 0) dv = -dv;
            return clamp_half(dv.enclosure(bits));
        }
        ensure_bits(bits + 64);
        RatInterval y = enc_ * Rat(Int(n));
        return clamp_half(dist_to_z_interval(y));
    }

    // n*alpha - round(n*alpha) in [-1/2, 1/2], certified enclosure
    RatInterval signed_frac(int64_t n, unsigned bits) {
        if (n == 0) return RatInterval(Rat(0));
        if (xr_) {
            Rat y = Rat(*xr_) * Rat(Int(n));
            return RatInterval(y - Rat(rat_round(y)));
        }
        if (xs_) {
            QuadRat y = *xs_ * Rat(Int(n));
            Int m = (y + Rat(1, 2)).floor();
            return (y - Rat(m)).enclosure(bits);
        }
        ensure_bits(bits + 64);
        RatInterval y = enc_ * Rat(Int(n));
        auto fl = (y + Rat(1, 2)).floor_certified();
        if (!fl) throw precision_error("precision-exhausted: signed fractional part");
        return y - Rat(*fl);
    }

    // -1 if ||n alpha|| < thr certified, +1 if > certified, 0 on exact equality
    int cmp(int64_t n, const Rat& thr, unsigned max_bits = 4096) {
        if (n == 0) return (Rat(0) < thr) ? -1 : 1;
        if (xr_) {
            Rat y = Rat(*xr_) * Rat(Int(n));
            Rat d = abs(y - Rat(rat_round(y)));
            return (d < thr) ? -1 : (d > thr ? 1 : 0);
        }
        if (xs_) {
            QuadRat y = *xs_ * Rat(Int(n));
            Int m = (y + Rat(1, 2)).floor();
            QuadRat dv = y - Rat(m);
            if (dv.sign() < 0) dv = -dv;
            return dv.cmp_rat(thr);
        }
        for (unsigned b = bits_; b <= max_bits; b *= 2) {
            RatInterval d = dist_enclosure(n, b);
            int c = d.cmp(thr);
            if (c != 0) return c;
            if (fixed_precision_) break;
        }
        throw precision_error("precision-exhausted: ||n alpha|| vs threshold undecidable");
    }

    MpIval dist_ival(int64_t n, unsigned prec) {
        return MpIval(dist_enclosure(n, prec + 32), prec);
    }

    // |lambda^n - 1| = 2 sin(pi ||n alpha||), certified
    MpIval small_divisor(int64_t n, unsigned prec) {
        MpIval d = dist_ival(n, prec);
        return d.sin_pi() * MpIval(2L, prec);
    }

  private:
    static RatInterval clamp_half(RatInterval v) {
        if (v.hi > Rat(1, 2)) v.hi = Rat(1, 2);
        if (v.lo < 0) v.lo = 0;
        return v;
    }
    RatInterval refine(unsigned bits) {
        if (auto* qsp = std::get_if<RealInput::QuotientSpec>(&t_.input.spec))
            return detail::tail_enclosure(*qsp, 0, bits);
        // decimal: fixed enclosure
        fixed_precision_ = true;
        return xval_enclosure(t_.x[0], bits);
    }
    void ensure_bits(unsigned bits) {
        if (bits > bits_ && !fixed_precision_) {
            bits_ = bits;
            enc_ = refine(bits_);
        }
    }

    const ContinuedFractionTable& t_;
    std::optional<Rat> xr_;
    std::optional<QuadRat> xs_;
    RatInterval enc_;
    unsigned bits_ = 128;
    bool fixed_precision_ = false;
};

} // namespace smalldiv

#endif
