#pragma once

#include <string>

namespace trigdens {

// Writes "trigdens: <message>" to stderr the first time `key` is seen in
// this process; repeated keys are dropped so hot loops stay quiet.
void log_once(const std::string& key, const std::string& message);

}  // namespace trigdens
