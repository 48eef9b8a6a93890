#ifndef IXM_CARDINAL_HPP_
#define IXM_CARDINAL_HPP_

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace ixm {

  // Cardinal values appearing as statistics of charts on the naturals.
  //
  // Every rank, collapse and defect is either finite or aleph0; aleph1 only
  // ever appears as an upper bound parameter (the successor of |N|).
  class Card {
   public:
    enum class Tier : std::uint8_t { finite, aleph0, aleph1 };

    constexpr Card() = default;

    static constexpr Card fin(std::uint64_t k) {
      return Card(Tier::finite, k);
    }
    static constexpr Card aleph0() {
      return Card(Tier::aleph0, 0);
    }
    static constexpr Card aleph1() {
      return Card(Tier::aleph1, 0);
    }

    constexpr Tier tier() const {
      return _tier;
    }
    constexpr bool is_finite() const {
      return _tier == Tier::finite;
    }
    constexpr bool is_infinite() const {
      return _tier != Tier::finite;
    }
    // Only meaningful for finite cardinals; 0 otherwise.
    constexpr std::uint64_t value() const {
      return _value;
    }

    friend constexpr std::strong_ordering operator<=>(Card const& a,
                                                      Card const& b) {
      if (a._tier != b._tier) {
        return a._tier <=> b._tier;
      }
      return a._value <=> b._value;
    }
    friend constexpr bool operator==(Card const&, Card const&) = default;

    // fin:<k>, aleph0, aleph1
    std::string str() const;
    static Card parse(std::string_view text);

   private:
    constexpr Card(Tier t, std::uint64_t v) : _tier(t), _value(v) {}

    Tier          _tier  = Tier::finite;
    std::uint64_t _value = 0;
  };

  // Cardinal sum on {finite, aleph0}. Throws InvalidParameter for aleph1.
  Card card_add(Card a, Card b);

  inline std::strong_ordering card_cmp(Card a, Card b) {
    return a <=> b;
  }

  inline Card operator+(Card a, Card b) {
    return card_add(a, b);
  }

  std::ostream& operator<<(std::ostream& os, Card const& c);

}  // namespace ixm

#endif  // IXM_CARDINAL_HPP_
