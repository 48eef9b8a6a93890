#include "ixm/cardinal.hpp"

#include <charconv>

#include "ixm/error.hpp"

namespace ixm {

  std::string Card::str() const {
    switch (_tier) {
      case Tier::finite:
        return "fin:" + std::to_string(_value);
      case Tier::aleph0:
        return "aleph0";
      case Tier::aleph1:
        return "aleph1";
    }
    return {};
  }

  Card Card::parse(std::string_view text) {
    if (text == "aleph0") {
      return aleph0();
    }
    if (text == "aleph1") {
      return aleph1();
    }
    if (text.starts_with("fin:")) {
      auto          digits = text.substr(4);
      std::uint64_t k      = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (ec == std::errc() && ptr == digits.data() + digits.size()
          && !digits.empty()) {
        return fin(k);
      }
    }
    throw ParseError("invalid cardinal '" + std::string(text)
                     + "' (expected fin:<k>, aleph0 or aleph1)");
  }

  Card card_add(Card a, Card b) {
    if (a.tier() == Card::Tier::aleph1 || b.tier() == Card::Tier::aleph1) {
      throw InvalidParameter(
          "aleph1 is a bound parameter, not a chart statistic; it cannot be "
          "added");
    }
    if (a.is_infinite() || b.is_infinite()) {
      return Card::aleph0();
    }
    return Card::fin(a.value() + b.value());
  }

  std::ostream& operator<<(std::ostream& os, Card const& c) {
    return os << c.str();
  }

}  // namespace ixm
