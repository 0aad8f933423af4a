#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace neoclust {

// Non-fatal diagnostics (dropped nodes, empty clusters, degenerate rounding)
// are routed through a process-wide handler. The default writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

// Installs `handler` and returns the previous one. An empty handler silences
// warnings.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

// RAII capture of warnings, mostly for tests.
class ScopedWarningCapture {
 public:
  ScopedWarningCapture();
  ~ScopedWarningCapture();
  ScopedWarningCapture(const ScopedWarningCapture&) = delete;
  ScopedWarningCapture& operator=(const ScopedWarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }
  bool empty() const { return messages_.empty(); }

 private:
  std::vector<std::string> messages_;
  WarningHandler previous_;
};

}  // namespace neoclust
