#ifndef IXM_ARITH_HPP_
#define IXM_ARITH_HPP_

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace ixm {

  using Int = std::int64_t;

  namespace arith {

    // Moduli above this are refused; keeps residue tables bounded.
    inline constexpr Int kModulusCap = Int(1) << 22;

    // lcm that throws ResourceError above kModulusCap.
    Int checked_lcm(Int a, Int b);

    // Non-negative remainder.
    inline Int mod(Int x, Int m) {
      Int r = x % m;
      return r < 0 ? r + m : r;
    }

    // Smallest value >= lower that is congruent to r modulo m.
    inline Int first_at_least(Int r, Int m, Int lower) {
      Int x = mod(r, m);
      if (x >= lower) {
        return x;
      }
      return x + ((lower - x + m - 1) / m) * m;
    }

    struct Congruence {
      Int residue;
      Int modulus;
    };

    // Solves x = r1 (mod m1), x = r2 (mod m2).
    std::optional<Congruence> crt(Int r1, Int m1, Int r2, Int m2);

    // Divisors of n in increasing order.
    std::vector<Int> divisors(Int n);

    // (prime, exponent) pairs of n >= 1.
    std::vector<std::pair<Int, int>> factorize(Int n);

    // If q = p^k with p prime and k >= 1, returns (p, k).
    std::optional<std::pair<Int, int>> prime_power(Int q);

    struct Rational {
      Int num = 0;
      Int den = 1;

      static Rational make(Int n, Int d);
      friend bool operator==(Rational const&, Rational const&) = default;
    };

  }  // namespace arith
}  // namespace ixm

#endif  // IXM_ARITH_HPP_
