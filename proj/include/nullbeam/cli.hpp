// Copyright 2026 The nullbeam Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>

namespace nullbeam {

/// Entry point of the `nullbeam` tool. Returns the process exit code: 0 on
/// success, 2 on a usage error, 1 on any other failure.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nullbeam
