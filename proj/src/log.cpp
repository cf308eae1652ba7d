#include "qhj/log.hpp"

#include <iostream>
#include <mutex>

namespace qhj {

namespace {

std::mutex sink_mutex;

WarningSink& sink_slot() {
  static WarningSink sink = [](std::string_view msg) { std::cerr << "warning: " << msg << '\n'; };
  return sink;
}

}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex);
  WarningSink old = std::move(sink_slot());
  sink_slot() = std::move(sink);
  return old;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink_slot()) sink_slot()(message);
}

}  // namespace qhj
