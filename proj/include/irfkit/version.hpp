#ifndef IRFKIT_VERSION_HPP
#define IRFKIT_VERSION_HPP

namespace irfkit {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
