#include "sldiff/rng.hpp"

#include "sldiff/normal.hpp"

namespace sldiff {

double CounterRng::normal(std::uint64_t path, std::uint64_t step) const {
    return normal_quantile(uniform(path, step));
}

}  // namespace sldiff
