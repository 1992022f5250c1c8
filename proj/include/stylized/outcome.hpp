#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "stylized/error.hpp"

namespace stylized {

struct NotEvaluable {
  std::string reason;
};

/// Either a computed value or the reason it could not be computed.
template <class T>
class Outcome {
 public:
  Outcome() : state_(NotEvaluable{"not computed"}) {}
  Outcome(T value) : state_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Outcome(NotEvaluable ne) : state_(std::move(ne)) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] bool has_value() const noexcept { return std::holds_alternative<T>(state_); }
  explicit operator bool() const noexcept { return has_value(); }

  [[nodiscard]] const T& value() const {
    if (!has_value()) fail(ErrorKind::InvalidArgument, "not evaluable: " + reason());
    return std::get<T>(state_);
  }
  [[nodiscard]] const T& operator*() const { return value(); }
  [[nodiscard]] const T* operator->() const { return &value(); }

  [[nodiscard]] const std::string& reason() const {
    static const std::string empty;
    if (const auto* ne = std::get_if<NotEvaluable>(&state_)) return ne->reason;
    return empty;
  }

 private:
  std::variant<T, NotEvaluable> state_;
};

/// Runs `f`, turning library errors into a NotEvaluable carrying the message.
template <class F>
auto evaluate(F&& f) -> Outcome<std::invoke_result_t<F>> {
  try {
    return std::forward<F>(f)();
  } catch (const Error& e) {
    return NotEvaluable{std::string(to_string(e.kind())) + ": " + e.what()};
  }
}

}  // namespace stylized
