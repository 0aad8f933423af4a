#include "neoclust/log.hpp"

#include <iostream>
#include <mutex>
#include <vector>

namespace neoclust {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler_slot() {
  static WarningHandler h = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(handler_mutex());
  std::swap(handler_slot(), handler);
  return handler;
}

void warn(const std::string& message) {
  std::lock_guard lock(handler_mutex());
  if (handler_slot()) handler_slot()(message);
}

ScopedWarningCapture::ScopedWarningCapture() {
  previous_ = set_warning_handler(
      [this](std::string_view msg) { messages_.emplace_back(msg); });
}

ScopedWarningCapture::~ScopedWarningCapture() {
  set_warning_handler(std::move(previous_));
}

}  // namespace neoclust
