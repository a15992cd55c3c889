#pragma once

#include <stdexcept>
#include <string>

namespace igm {

/// Base class of every error raised by the library. `kind()` is the short
/// machine-readable name used by the CLI and in diagnostics.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string &what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define IGM_DEFINE_ERROR(Name)                                                 \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name, what) {}             \
  };

IGM_DEFINE_ERROR(ParseError)
IGM_DEFINE_ERROR(InvalidArgument)
IGM_DEFINE_ERROR(WrapSplitRequired)
IGM_DEFINE_ERROR(NotInjective)
IGM_DEFINE_ERROR(NonComparable)
IGM_DEFINE_ERROR(OverlappingSupports)
IGM_DEFINE_ERROR(NotCellRigid)
IGM_DEFINE_ERROR(IterationCapExceeded)
IGM_DEFINE_ERROR(NonTerminating)
IGM_DEFINE_ERROR(NotMeasurePreserving)
IGM_DEFINE_ERROR(SupportMismatch)
IGM_DEFINE_ERROR(IndeterminateMeasure)
IGM_DEFINE_ERROR(SeriesNotCertified)
IGM_DEFINE_ERROR(BadAlphabet)
IGM_DEFINE_ERROR(PairingRequired)
IGM_DEFINE_ERROR(MalformedHalt)
IGM_DEFINE_ERROR(NotEssential)
IGM_DEFINE_ERROR(InvalidMachine)
IGM_DEFINE_ERROR(InternalError)

#undef IGM_DEFINE_ERROR

} // namespace igm
