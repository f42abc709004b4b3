#pragma once

namespace rotormesh {

/// Selects the loop driver for data-parallel kernels. `serial` is the
/// reference path kept for verification; `parallel` uses OpenMP.
enum class Exec { serial, parallel };

/// Sets the OpenMP thread count used by parallel kernels (n <= 0 keeps the
/// runtime default).
void set_thread_count(int n);
int thread_count();

}  // namespace rotormesh
