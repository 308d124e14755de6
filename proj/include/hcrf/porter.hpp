#pragma once

#include <string>
#include <string_view>

namespace hcrf {

/// Porter (1980) suffix-stripping stemmer, following the author's reference
/// implementation (including its "bli" -> "ble" and "logi" -> "log" rules).
/// Input is expected in lower case; words of length <= 2 are returned as is.
std::string porter_stem(std::string_view word);

}  // namespace hcrf
