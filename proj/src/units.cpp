#include "magnonlink/units.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "magnonlink/errors.hpp"

namespace magnonlink {

namespace {

std::string normalize_minus(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 MINUS SIGN is E2 88 92 in UTF-8.
    if (text.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_power(std::string_view text) {
  const std::string normalized = normalize_minus(trim(text));
  std::string_view s = normalized;
  double number = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
  if (ec != std::errc() || !std::isfinite(number)) {
    throw ValidationError("cannot parse power '" + std::string(text) + "'");
  }
  const std::string_view unit = trim(s.substr(static_cast<std::size_t>(end - s.data())));
  double watts = 0;
  if (unit == "dBm") {
    watts = dbm_to_watt(number);
  } else if (unit == "W") {
    watts = number;
  } else if (unit == "mW") {
    watts = 1e-3 * number;
  } else if (unit == "uW" || unit == "\xC2\xB5W" || unit == "\xCE\xBCW") {
    watts = 1e-6 * number;
  } else if (unit == "nW") {
    watts = 1e-9 * number;
  } else {
    throw ValidationError("power '" + std::string(text) +
                          "' needs a unit of dBm, W, mW, uW or nW");
  }
  if (!(watts >= 0)) throw ValidationError("power '" + std::string(text) + "' is negative");
  return watts;
}

}  // namespace magnonlink
