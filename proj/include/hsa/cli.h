/*
 * Copyright 2026 The HSA Toolkit Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HSA_CLI_H_
#define HSA_CLI_H_

#include <ostream>
#include <span>
#include <string>

namespace hsa {

// Process exit codes of the hsa command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitDomain = 2,      // bad arguments or configuration outside the model
  kExitInfeasible = 3,  // T >= (U-1)V
  kExitCorrupt = 4,     // unreadable or invalid scheme / transcript
  kExitInsecure = 5,    // audit found violations
  kExitBudget = 6,      // audit or enumeration budget exceeded
};

// Runs one invocation. args[0] is the program name.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace hsa

#endif  // HSA_CLI_H_
