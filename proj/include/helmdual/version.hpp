#pragma once

namespace helmdual {

inline const char* version_string() { return "0.1.0"; }

} // namespace helmdual
