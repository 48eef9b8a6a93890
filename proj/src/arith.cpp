#include "ixm/arith.hpp"

#include <string>

#include "ixm/error.hpp"

namespace ixm::arith {

  Int checked_lcm(Int a, Int b) {
    __int128 l = static_cast<__int128>(a / std::gcd(a, b)) * b;
    if (l > kModulusCap) {
      throw ResourceError("modulus lcm(" + std::to_string(a) + ", "
                          + std::to_string(b) + ") exceeds the cap of "
                          + std::to_string(kModulusCap));
    }
    return static_cast<Int>(l);
  }

  namespace {
    // Returns (g, x, y) with a*x + b*y = g.
    void ext_gcd(__int128 a, __int128 b, __int128& g, __int128& x, __int128& y) {
      if (b == 0) {
        g = a;
        x = 1;
        y = 0;
        return;
      }
      __int128 x1, y1;
      ext_gcd(b, a % b, g, x1, y1);
      x = y1;
      y = x1 - (a / b) * y1;
    }
  }  // namespace

  std::optional<Congruence> crt(Int r1, Int m1, Int r2, Int m2) {
    __int128 g, p, q;
    ext_gcd(m1, m2, g, p, q);
    __int128 diff = static_cast<__int128>(r2) - r1;
    if (diff % g != 0) {
      return std::nullopt;
    }
    __int128 l = static_cast<__int128>(m1) / g * m2;
    __int128 t = (diff / g) * p % (m2 / g);
    __int128 x = (static_cast<__int128>(r1) + m1 * t) % l;
    if (x < 0) {
      x += l;
    }
    return Congruence{static_cast<Int>(x), static_cast<Int>(l)};
  }

  std::vector<Int> divisors(Int n) {
    std::vector<Int> small, large;
    for (Int d = 1; d * d <= n; ++d) {
      if (n % d == 0) {
        small.push_back(d);
        if (d != n / d) {
          large.push_back(n / d);
        }
      }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
  }

  std::vector<std::pair<Int, int>> factorize(Int n) {
    std::vector<std::pair<Int, int>> out;
    for (Int p = 2; p * p <= n; ++p) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      if (e > 0) {
        out.emplace_back(p, e);
      }
    }
    if (n > 1) {
      out.emplace_back(n, 1);
    }
    return out;
  }

  std::optional<std::pair<Int, int>> prime_power(Int q) {
    if (q < 2) {
      return std::nullopt;
    }
    auto f = factorize(q);
    if (f.size() != 1) {
      return std::nullopt;
    }
    return f.front();
  }

  Rational Rational::make(Int n, Int d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    Int g = std::gcd(n < 0 ? -n : n, d);
    if (g == 0) {
      return {0, 1};
    }
    return {n / g, d / g};
  }

}  // namespace ixm::arith
