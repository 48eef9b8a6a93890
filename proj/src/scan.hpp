#ifndef IXM_SRC_SCAN_HPP_
#define IXM_SRC_SCAN_HPP_

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "ixm/arith.hpp"
#include "ixm/error.hpp"

namespace ixm::detail {

  // Whitespace-insensitive cursor over the small text formats.
  class Scanner {
   public:
    Scanner(std::string_view text, std::string what) : _s(text), _what(std::move(what)) {}

    void skip_ws() {
      while (_pos < _s.size() && std::isspace(static_cast<unsigned char>(_s[_pos]))) {
        ++_pos;
      }
    }

    bool at_end() {
      skip_ws();
      return _pos >= _s.size();
    }

    bool try_consume(std::string_view lit) {
      skip_ws();
      if (_s.substr(_pos).starts_with(lit)) {
        _pos += lit.size();
        return true;
      }
      return false;
    }

    void expect(std::string_view lit) {
      if (!try_consume(lit)) {
        fail("expected '" + std::string(lit) + "'");
      }
    }

    char peek() {
      skip_ws();
      return _pos < _s.size() ? _s[_pos] : '\0';
    }

    Int read_int() {
      skip_ws();
      Int         v     = 0;
      char const* begin = _s.data() + _pos;
      auto [ptr, ec]    = std::from_chars(begin, _s.data() + _s.size(), v);
      if (ec != std::errc() || ptr == begin) {
        fail("expected an integer");
      }
      _pos += static_cast<std::size_t>(ptr - begin);
      return v;
    }

    Int read_nat() {
      Int v = read_int();
      if (v < 0) {
        fail("expected a natural number, got " + std::to_string(v));
      }
      return v;
    }

    [[noreturn]] void fail(std::string const& msg) const {
      throw ParseError(_what + ": " + msg + " at offset " + std::to_string(_pos));
    }

   private:
    std::string_view _s;
    std::size_t      _pos = 0;
    std::string      _what;
  };

}  // namespace ixm::detail

#endif  // IXM_SRC_SCAN_HPP_
