#pragma once

namespace efs {

/// Caps the worker count used by the all-pairs loops. Values < 1 restore the
/// runtime default. Results do not depend on this setting.
void set_max_threads(int threads);
int max_threads();

}  // namespace efs
