#ifndef LAMPLAB_LOG_HPP
#define LAMPLAB_LOG_HPP

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

namespace lamplab {

// Log level from LAMPLAB_LOG (error|warn|info|debug), default warn.
inline int log_level() {
    static const int level = [] {
        const char* env = std::getenv("LAMPLAB_LOG");
        if (!env) return 1;
        if (std::strcmp(env, "error") == 0) return 0;
        if (std::strcmp(env, "warn") == 0) return 1;
        if (std::strcmp(env, "info") == 0) return 2;
        if (std::strcmp(env, "debug") == 0) return 3;
        return 1;
    }();
    return level;
}

inline void log_warn(const std::string& msg) {
    if (log_level() >= 1) std::fprintf(stderr, "[warn] %s\n", msg.c_str());
}
inline void log_info(const std::string& msg) {
    if (log_level() >= 2) std::fprintf(stderr, "[info] %s\n", msg.c_str());
}
inline void log_debug(const std::string& msg) {
    if (log_level() >= 3) std::fprintf(stderr, "[debug] %s\n", msg.c_str());
}

} // namespace lamplab

#endif
