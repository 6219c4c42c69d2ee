#include "mellinstop/warnings.hpp"

#include <iostream>
#include <mutex>

namespace mellinstop {

namespace {
std::mutex g_mu;
WarnFn g_handler;
}  // namespace

void set_warning_handler(WarnFn fn) {
  std::lock_guard<std::mutex> lk(g_mu);
  g_handler = std::move(fn);
}

void warn(const std::string& message) {
  std::lock_guard<std::mutex> lk(g_mu);
  if (g_handler) {
    g_handler(message);
  } else {
    std::cerr << "warning: " << message << "\n";
  }
}

}  // namespace mellinstop
