#pragma once

#include <memory>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

namespace motioncone::detail {

// Shared stderr logger; quiet (errors only) until configure_logging runs.
inline std::shared_ptr<spdlog::logger> logger() {
  auto l = spdlog::get("motioncone");
  if (!l) {
    l = spdlog::stderr_color_mt("motioncone");
    l->set_level(spdlog::level::err);
  }
  return l;
}

}  // namespace motioncone::detail
