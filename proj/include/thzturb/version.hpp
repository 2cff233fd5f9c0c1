#ifndef THZTURB_VERSION_HPP
#define THZTURB_VERSION_HPP

namespace thzturb {
inline constexpr const char* version = "0.1.0";
}

#endif
