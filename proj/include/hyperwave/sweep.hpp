#pragma once

#include <type_traits>
#include <vector>

#include "hyperwave/parallel.hpp"

namespace hyperwave {

// Evaluates f on every item, up to `jobs` at a time. Results keep the item
// order, so the output does not depend on the job count.
template <class Item, class F>
auto run_sweep(const std::vector<Item>& items, unsigned jobs, F&& f) {
    using Result = std::decay_t<std::invoke_result_t<F&, const Item&>>;
    std::vector<Result> out(items.size());
    parallel_for(items.size(), jobs, [&](std::size_t i) { out[i] = f(items[i]); });
    return out;
}

}  // namespace hyperwave
