#pragma once

#include <string>

namespace vfa {

// Directory holding the bundled font, tables and mock corpus. The VFA_DATA_DIR
// environment variable overrides the location compiled into the library.
std::string data_dir();

// data_dir() + "/" + relative
std::string data_path(const std::string &relative);

// Font used when a configuration names none.
std::string default_font_path();

}  // namespace vfa
