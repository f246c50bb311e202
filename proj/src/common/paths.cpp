#include "vfa/paths.hpp"

#include <cstdlib>

namespace vfa {

std::string data_dir() {
  if (const char *env = std::getenv("VFA_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return VFA_DATA_DIR;
}

std::string data_path(const std::string &relative) { return data_dir() + "/" + relative; }

std::string default_font_path() { return data_path("fonts/NotoSansSC-GB2312.otf"); }

}  // namespace vfa
