#include "arborwalk/errors.hpp"

#include <cstdlib>
#include <string>

namespace arborwalk {

namespace {
constexpr std::size_t kDefaultCapDim = 20000;
}

std::size_t block_dimension_cap() {
    const char* env = std::getenv("ARBORWALK_CAP_DIM");
    if (env == nullptr || *env == '\0') {
        return kDefaultCapDim;
    }
    try {
        const long long v = std::stoll(env);
        if (v > 0) {
            return static_cast<std::size_t>(v);
        }
    } catch (const std::exception&) {
    }
    throw InputError(std::string("ARBORWALK_CAP_DIM is not a positive integer: ") + env);
}

}  // namespace arborwalk
