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

#include "kinscat/wave.hpp"

#include "kinscat/errors.hpp"

namespace kinscat {

ShellKernel wave_kernel(const Medium &medium, double energy, const KernelOptions &options) {
  if (medium.model() != Model::wave || medium.dispersion().kind() != DispersionKind::linear) {
    throw ConfigError("wave kernel requires model = wave with the linear dispersion");
  }
  return ShellKernel(medium, energy, options);
}

}  // namespace kinscat
