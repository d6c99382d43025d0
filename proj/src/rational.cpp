#include "fda/rational.hpp"
#include "fda/errors.hpp"

#include <gmp.h>

#include <cstdlib>
#include <limits>

namespace fda {

namespace {

using i128 = __int128;

i128 iabs128(i128 x) { return x < 0 ? -x : x; }

i128 gcd128(i128 a, i128 b) {
    a = iabs128(a);
    b = iabs128(b);
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits64(i128 x) {
    return x >= std::numeric_limits<long long>::min() &&
           x <= std::numeric_limits<long long>::max();
}

mpq_t* as_q(void* p) { return static_cast<mpq_t*>(p); }
const mpq_t* as_q(const void* p) { return static_cast<const mpq_t*>(p); }

void set_mpz_i128(mpz_t z, i128 v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
    mpz_set_ui(z, (unsigned long)(u >> 64));
    mpz_mul_2exp(z, z, 64);
    mpz_add_ui(z, z, (unsigned long)(u & 0xffffffffffffffffULL));
    if (neg) mpz_neg(z, z);
}

} // namespace

Rat::Rat(long long n, long long d) : big_(nullptr) {
    if (d == 0) throw error("rational with zero denominator");
    assign_reduced_i128(n, d);
}

Rat::Rat(const Rat& o) : num_(o.num_), den_(o.den_), big_(nullptr) {
    if (o.big_) set_big_from(o);
}

Rat::Rat(Rat&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) {
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
}

Rat& Rat::operator=(const Rat& o) {
    if (this == &o) return *this;
    if (o.big_) {
        if (big_) {
            mpq_set(*as_q(big_), *as_q(o.big_));
        } else {
            set_big_from(o);
        }
    } else {
        clear_big();
        num_ = o.num_;
        den_ = o.den_;
    }
    return *this;
}

Rat& Rat::operator=(Rat&& o) noexcept {
    if (this == &o) return *this;
    clear_big();
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_;
    o.big_ = nullptr;
    o.num_ = 0;
    o.den_ = 1;
    return *this;
}

Rat::~Rat() { clear_big(); }

void Rat::clear_big() {
    if (big_) {
        mpq_clear(*as_q(big_));
        delete as_q(big_);
        big_ = nullptr;
    }
}

void Rat::set_big_from(const Rat& o) {
    auto* q = new mpq_t[1];
    mpq_init(*q);
    mpq_set(*q, *as_q(o.big_));
    big_ = q;
}

void Rat::promote_set_i128(i128 n, i128 d) {
    auto* q = new mpq_t[1];
    mpq_init(*q);
    mpz_t zn, zd;
    mpz_init(zn);
    mpz_init(zd);
    set_mpz_i128(zn, n);
    set_mpz_i128(zd, d);
    mpz_set(mpq_numref(*q), zn);
    mpz_set(mpq_denref(*q), zd);
    mpq_canonicalize(*q);
    mpz_clear(zn);
    mpz_clear(zd);
    clear_big();
    big_ = q;
}

void Rat::assign_reduced_i128(i128 n, i128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0) {
        clear_big();
        num_ = 0;
        den_ = 1;
        return;
    }
    i128 g = gcd128(n, d);
    n /= g;
    d /= g;
    if (fits64(n) && fits64(d)) {
        clear_big();
        num_ = (long long)n;
        den_ = (long long)d;
    } else {
        promote_set_i128(n, d);
    }
}

void Rat::try_demote() {
    if (!big_) return;
    mpq_t* q = as_q(big_);
    if (mpz_fits_slong_p(mpq_numref(*q)) && mpz_fits_slong_p(mpq_denref(*q))) {
        long long n = mpz_get_si(mpq_numref(*q));
        long long d = mpz_get_si(mpq_denref(*q));
        clear_big();
        num_ = n;
        den_ = d;
    }
}

bool Rat::is_integer() const {
    if (big_) return mpz_cmp_ui(mpq_denref(*as_q(big_)), 1) == 0;
    return den_ == 1;
}

int Rat::sgn() const {
    if (big_) return mpq_sgn(*as_q(big_));
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

long long Rat::num_small() const {
    if (big_) throw error("rational too large for num_small");
    return num_;
}

long long Rat::den_small() const {
    if (big_) throw error("rational too large for den_small");
    return den_;
}

Rat Rat::operator-() const {
    Rat r(*this);
    if (r.big_) {
        mpq_neg(*as_q(r.big_), *as_q(r.big_));
    } else {
        r.num_ = -r.num_;
    }
    return r;
}

Rat& Rat::operator+=(const Rat& o) {
    if (!big_ && !o.big_) {
        i128 n = (i128)num_ * o.den_ + (i128)o.num_ * den_;
        i128 d = (i128)den_ * o.den_;
        assign_reduced_i128(n, d);
        return *this;
    }
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    mpq_add(*as_q(a.big_), *as_q(a.big_), *as_q(b.big_));
    *this = a;
    try_demote();
    return *this;
}

Rat& Rat::operator-=(const Rat& o) {
    if (!big_ && !o.big_) {
        i128 n = (i128)num_ * o.den_ - (i128)o.num_ * den_;
        i128 d = (i128)den_ * o.den_;
        assign_reduced_i128(n, d);
        return *this;
    }
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    mpq_sub(*as_q(a.big_), *as_q(a.big_), *as_q(b.big_));
    *this = a;
    try_demote();
    return *this;
}

Rat& Rat::operator*=(const Rat& o) {
    if (!big_ && !o.big_) {
        i128 n = (i128)num_ * o.num_;
        i128 d = (i128)den_ * o.den_;
        assign_reduced_i128(n, d);
        return *this;
    }
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    mpq_mul(*as_q(a.big_), *as_q(a.big_), *as_q(b.big_));
    *this = a;
    try_demote();
    return *this;
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero()) throw error("rational division by zero");
    if (!big_ && !o.big_) {
        i128 n = (i128)num_ * o.den_;
        i128 d = (i128)den_ * o.num_;
        assign_reduced_i128(n, d);
        return *this;
    }
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    mpq_div(*as_q(a.big_), *as_q(a.big_), *as_q(b.big_));
    *this = a;
    try_demote();
    return *this;
}

Rat Rat::inverse() const {
    if (is_zero()) throw error("inverse of zero");
    Rat r(1);
    r /= *this;
    return r;
}

void Rat::add_mul(const Rat& b, const Rat& c) {
    if (!big_ && !b.big_ && !c.big_) {
        i128 bn = (i128)b.num_ * c.num_;
        i128 bd = (i128)b.den_ * c.den_;
        // (num_/den_) + bn/bd
        i128 n = (i128)num_ * bd + bn * den_;
        i128 d = (i128)den_ * bd;
        assign_reduced_i128(n, d);
        return;
    }
    *this += b * c;
}

bool Rat::operator==(const Rat& o) const {
    if (!big_ && !o.big_) return num_ == o.num_ && den_ == o.den_;
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    return mpq_equal(*as_q(a.big_), *as_q(b.big_)) != 0;
}

bool Rat::operator<(const Rat& o) const {
    if (!big_ && !o.big_) {
        return (i128)num_ * o.den_ < (i128)o.num_ * den_;
    }
    Rat a(*this), b(o);
    if (!a.big_) a.promote_set_i128(a.num_, a.den_);
    if (!b.big_) b.promote_set_i128(b.num_, b.den_);
    return mpq_cmp(*as_q(a.big_), *as_q(b.big_)) < 0;
}

std::string Rat::str() const {
    if (big_) {
        char* s = mpq_get_str(nullptr, 10, *as_q(big_));
        std::string r(s);
        std::free(s);
        return r;
    }
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rat Rat::from_string(const std::string& s) {
    auto slash = s.find('/');
    mpq_t q;
    mpq_init(q);
    if (mpq_set_str(q, s.c_str(), 10) != 0) {
        mpq_clear(q);
        throw error("bad rational literal: " + s);
    }
    mpq_canonicalize(q);
    Rat r;
    if (mpz_fits_slong_p(mpq_numref(q)) && mpz_fits_slong_p(mpq_denref(q))) {
        r.num_ = mpz_get_si(mpq_numref(q));
        r.den_ = mpz_get_si(mpq_denref(q));
        mpq_clear(q);
    } else {
        auto* h = new mpq_t[1];
        mpq_init(*h);
        mpq_set(*h, q);
        mpq_clear(q);
        r.big_ = h;
    }
    (void)slash;
    return r;
}

} // namespace fda
