#include "gravchan/parallel.hpp"

#include <cstdlib>
#include <string>

namespace gravchan {

std::size_t worker_count() {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("GRAVCHAN_THREADS");
    if (env == nullptr || *env == '\0') return hw;
    try {
        const long long requested = std::stoll(env);
        if (requested <= 0) return hw;
        return static_cast<std::size_t>(requested);
    } catch (const std::exception&) {
        return hw;
    }
}

}  // namespace gravchan
