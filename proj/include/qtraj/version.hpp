#ifndef QTRAJ_VERSION_HPP
#define QTRAJ_VERSION_HPP

namespace qtraj {

inline constexpr const char* kVersion = "0.1.0";

}

#endif
