#include "genvam/verdict.hpp"

#include <utility>

namespace genvam {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "PASS";
    case Status::Fail:
      return "FAIL";
    case Status::Partial:
      return "PARTIAL";
  }
  return "?";
}

void Verdict::fail(Violation v, std::string why) {
  if (status == Status::Fail) return;
  status = Status::Fail;
  violation = std::move(v);
  if (!why.empty()) detail = std::move(why);
}

void Verdict::partial(std::string why) {
  if (status == Status::Fail) return;
  status = Status::Partial;
  if (!detail.empty()) detail += "; ";
  detail += why;
}

Status combine(Status a, Status b) {
  if (a == Status::Fail || b == Status::Fail) return Status::Fail;
  if (a == Status::Partial || b == Status::Partial) return Status::Partial;
  return Status::Pass;
}

}  // namespace genvam
