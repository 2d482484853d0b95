#pragma once

#include <string>
#include <string_view>

namespace udsim {

// Simple (1:1) case folding of a UTF-8 string. Covers ASCII, Latin-1,
// Latin Extended-A, Greek and Cyrillic; other code points pass through.
// Invalid byte sequences are copied unchanged.
std::string case_fold(std::string_view utf8);

}  // namespace udsim
