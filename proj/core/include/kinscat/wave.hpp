/*
   Copyright 2026 The kinscat Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "kinscat/kernel.hpp"

namespace kinscat {

/// Shell kernel for scalar waves: omega = |k| and an omega^2 weight on the
/// collision rate. The cosine table is the Schroedinger one, since omega^2 is
/// constant on a shell.
///
/// Throws ConfigError unless the medium uses model = wave (which in turn
/// forces the linear dispersion).
ShellKernel wave_kernel(const Medium &medium, double energy,
                        const KernelOptions &options = {});

}  // namespace kinscat
