#pragma once

#include <cmath>
#include <cstddef>

#include "sembed/error.hpp"

namespace sembed {

// Warm-up then linear decay: lr ramps linearly to the peak over the first
// ceil(warmup_fraction * total) steps as peak*(step+1)/warmup_steps, then
// decays linearly to 0 at the final step as peak*(total-step)/(total-warmup).
inline double lr_schedule(std::size_t step, std::size_t total_steps,
                          double peak_lr, double warmup_fraction) {
  if (total_steps == 0 || step >= total_steps) {
    throw ValidationError("lr_schedule: step out of range");
  }
  if (warmup_fraction < 0.0 || warmup_fraction > 1.0) {
    throw ValidationError("warmup fraction must lie in [0, 1]");
  }
  auto warmup_steps = static_cast<std::size_t>(
      std::ceil(warmup_fraction * static_cast<double>(total_steps)));
  if (step < warmup_steps) {
    return peak_lr * static_cast<double>(step + 1) /
           static_cast<double>(warmup_steps);
  }
  return peak_lr * static_cast<double>(total_steps - step) /
         static_cast<double>(total_steps - warmup_steps);
}

}  // namespace sembed
