#include "netquality/types.hpp"

namespace nq {

namespace {

std::string with_location(const std::string& what, const std::string& source, std::size_t line) {
  if (source.empty()) return what;
  if (line == 0) return source + ": " + what;
  return source + ":" + std::to_string(line) + ": " + what;
}

}  // namespace

InputError::InputError(const std::string& what, std::string source, std::size_t line)
    : Error(with_location(what, source, line)), source_(std::move(source)), line_(line) {}

WeekIndex week_of(Timestamp t) {
  if (t < 0) throw InputError("negative timestamp " + std::to_string(t));
  return static_cast<WeekIndex>(t / kSecondsPerWeek);
}

}  // namespace nq
