#ifndef SMALLDIV_INTERVAL_HPP
#define SMALLDIV_INTERVAL_HPP

#include <cstdarg>
#include <cstdio>

#include <mpfr.h>
#include <smalldiv/rational.hpp>

#include <algorithm>
#include <string>
#include <utility>

namespace smalldiv {

// Certified real interval on MPFR with outward (directed) rounding.
// Used wherever a transcendental value feeds a comparison or a published
// number: logs in Brjuno sums and Davie's K, small-divisor magnitudes
// 2 sin(pi |n alpha|), exp for closed forms.  Precision is per-value.
class MpIval {
  public:
    static constexpr unsigned kDefaultPrec = 128;

    MpIval() : MpIval(0L, kDefaultPrec) {}
    explicit MpIval(long v, unsigned prec = kDefaultPrec) {
        init(prec);
        mpfr_set_si(lo_, v, MPFR_RNDD);
        mpfr_set_si(hi_, v, MPFR_RNDU);
    }
    explicit MpIval(const Rat& v, unsigned prec = kDefaultPrec) {
        init(prec);
        mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
    }
    explicit MpIval(const RatInterval& v, unsigned prec = kDefaultPrec) {
        init(prec);
        mpfr_set_q(lo_, v.lo.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi_, v.hi.get_mpq_t(), MPFR_RNDU);
    }
    explicit MpIval(const Int& v, unsigned prec = kDefaultPrec) {
        init(prec);
        mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
    }

    MpIval(const MpIval& o) {
        init(o.prec_);
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    MpIval(MpIval&& o) noexcept : prec_(o.prec_) {
        lo_[0] = o.lo_[0];
        hi_[0] = o.hi_[0];
        o.moved_ = true;
    }
    MpIval& operator=(MpIval o) noexcept {
        std::swap(prec_, o.prec_);
        std::swap(lo_[0], o.lo_[0]);
        std::swap(hi_[0], o.hi_[0]);
        std::swap(moved_, o.moved_);
        return *this;
    }
    ~MpIval() {
        if (!moved_) {
            mpfr_clear(lo_);
            mpfr_clear(hi_);
        }
    }

    unsigned prec() const { return prec_; }

    static MpIval pi(unsigned prec = kDefaultPrec) {
        MpIval r(0L, prec);
        mpfr_const_pi(r.lo_, MPFR_RNDD);
        mpfr_const_pi(r.hi_, MPFR_RNDU);
        return r;
    }

    MpIval operator-() const {
        MpIval r(0L, prec_);
        mpfr_neg(r.lo_, hi_, MPFR_RNDD);
        mpfr_neg(r.hi_, lo_, MPFR_RNDU);
        return r;
    }
    MpIval operator+(const MpIval& o) const {
        MpIval r(0L, std::max(prec_, o.prec_));
        mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
        return r;
    }
    MpIval operator-(const MpIval& o) const { return *this + (-o); }
    MpIval operator*(const MpIval& o) const {
        MpIval r(0L, std::max(prec_, o.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        // lo: min of the four downward products, hi: max of the four upward
        bool first = true;
        for (int i = 0; i < 4; ++i) {
            const __mpfr_struct* x = (i & 1) ? hi_ : lo_;
            const __mpfr_struct* y = (i & 2) ? o.hi_ : o.lo_;
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
        mpfr_clear(t);
        return r;
    }
    MpIval& operator+=(const MpIval& o) { return *this = *this + o; }

    // natural log; requires a strictly positive interval
    MpIval log() const {
        if (mpfr_sgn(lo_) <= 0) throw precision_error("MpIval::log of non-positive interval");
        MpIval r(0L, prec_);
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
        mpfr_log(r.hi_, hi_, MPFR_RNDU);
        return r;
    }
    MpIval exp() const {
        MpIval r(0L, prec_);
        mpfr_exp(r.lo_, lo_, MPFR_RNDD);
        mpfr_exp(r.hi_, hi_, MPFR_RNDU);
        return r;
    }
    // 1/x for intervals not containing zero
    MpIval recip() const {
        if (contains_zero()) throw precision_error("MpIval::recip across zero");
        MpIval r(0L, prec_);
        mpfr_ui_div(r.lo_, 1, hi_, MPFR_RNDD);
        mpfr_ui_div(r.hi_, 1, lo_, MPFR_RNDU);
        return r;
    }

    // sin(pi*x) for x in [0, 1/2], where sin is monotone increasing
    MpIval sin_pi() const {
        if (mpfr_sgn(lo_) < 0 || mpfr_cmp_d(hi_, 0.5) > 0)
            throw precondition_error("MpIval::sin_pi needs x in [0,1/2]");
        MpIval p = pi(prec_);
        MpIval arg = *this * p;
        MpIval r(0L, prec_);
        mpfr_sin(r.lo_, arg.lo_, MPFR_RNDD);
        mpfr_sin(r.hi_, arg.hi_, MPFR_RNDU);
        return r;
    }

    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lo_d() + hi_d()); }
    double width_d() const { return hi_d() - lo_d(); }

    // -1: certainly < o, +1: certainly > o, 0: overlapping
    int cmp(const MpIval& o) const {
        if (mpfr_less_p(hi_, o.lo_)) return -1;
        if (mpfr_greater_p(lo_, o.hi_)) return 1;
        return 0;
    }
    bool certainly_le(const MpIval& o) const { return mpfr_lessequal_p(hi_, o.lo_); }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

    // decimal rendering of the midpoint with enough digits for prec bits
    std::string str(int digits = 0) const {
        if (digits <= 0) digits = static_cast<int>(prec_ * 0.30103) + 2;
        mpfr_t m;
        mpfr_init2(m, prec_);
        mpfr_add(m, lo_, hi_, MPFR_RNDN);
        mpfr_div_2ui(m, m, 1, MPFR_RNDN);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%%.%dRg", digits);
        char* out = nullptr;
        mpfr_asprintf(&out, buf, m);
        std::string s(out);
        mpfr_free_str(out);
        mpfr_clear(m);
        return s;
    }

  private:
    void init(unsigned prec) {
        prec_ = prec;
        mpfr_init2(lo_, prec);
        mpfr_init2(hi_, prec);
    }
    mpfr_t lo_, hi_;
    unsigned prec_ = kDefaultPrec;
    bool moved_ = false;
};

} // namespace smalldiv

#endif
