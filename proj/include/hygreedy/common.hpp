#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace hygreedy {

inline constexpr const char* version_string = "hygreedy/0.1.0";

using Vertex = std::int32_t;
using EdgeIndex = std::int64_t;

// Bad or inconsistent input (malformed files, out-of-range ids, ...).
// The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition or hypothesis of the requested computation
// does not hold for the given instance. CLI exit code 3.
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

// A configured resource budget (operation count, subdivision cap, ...)
// would be exceeded. CLI exit code 4.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

inline void require_input(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

inline void require_hypothesis(bool ok, const std::string& what) {
    if (!ok) throw HypothesisError(what);
}

// Worker count for parallelizable operations, capped by HYGREEDY_THREADS.
inline int thread_count() {
    if (const char* env = std::getenv("HYGREEDY_THREADS")) {
        const int k = std::atoi(env);
        if (k >= 1) return k;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace hygreedy
