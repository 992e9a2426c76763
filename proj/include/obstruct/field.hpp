#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "obstruct/errors.hpp"

namespace obstruct {

/// The prime field F_p. Elements are residues kept in [0, p).
class PrimeField {
  public:
    using Elem = std::uint32_t;

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (!is_prime(p) || p > 65521)
            throw InvalidInput("characteristic must be a prime below 2^16, got " + std::to_string(p));
    }

    std::uint32_t characteristic() const { return p_; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }

    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const {
        return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Elem inv(Elem a) const {
        if (a == 0)
            throw InvalidInput("division by zero in F_" + std::to_string(p_));
        // extended Euclid on (a, p)
        std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            std::int64_t tmp = t - q * new_t;
            t = new_t;
            new_t = tmp;
            tmp = r - q * new_r;
            r = new_r;
            new_r = tmp;
        }
        if (t < 0)
            t += p_;
        return static_cast<Elem>(t);
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem from_int(long long v) const {
        long long m = v % static_cast<long long>(p_);
        if (m < 0)
            m += p_;
        return static_cast<Elem>(m);
    }
    /// Sign factor (-1)^e as a field element.
    Elem sign(long long e) const { return (e % 2 == 0) ? 1 : neg(1); }

    /// Representative in (-p/2, p/2], handy for display.
    long long to_signed(Elem a) const {
        return a > p_ / 2 ? static_cast<long long>(a) - p_ : static_cast<long long>(a);
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

    static bool is_prime(std::uint32_t n) {
        if (n < 2)
            return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

  private:
    std::uint32_t p_;
};

/// The rationals, exact, always in lowest terms with positive denominator.
class RationalField {
  public:
    using Elem = boost::multiprecision::cpp_rational;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0)
            throw InvalidInput("division by zero in Q");
        return 1 / a;
    }
    Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }
    Elem from_int(long long v) const { return Elem(v); }
    Elem sign(long long e) const { return (e % 2 == 0) ? Elem(1) : Elem(-1); }
    std::uint32_t characteristic() const { return 0; }
    bool operator==(const RationalField&) const { return true; }
};

} // namespace obstruct
