#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orgtrace {

enum class Errc {
  EmptyInput,
  IllegalLabel,
  IsPublicSuffix,
  NoLabels,
  EmptyAfterNormalization,
  BudgetExhausted,
  Timeout,
  TooManyRedirects,
  ReplayMiss,
  TransportFailure,
  ProviderUnavailable,
  ArchiveCorrupt,
  NoServerForTld,
  EmptyResponse,
  NoTls,
  HandshakeFailure,
  Unreachable,
  NoCandidates,
  EmptyDocument,
  TooShort,
  Indeterminate,
  NotEnglish,
  SingleClassCorpus,
  EmptyCorpus,
  EmptyText,
  NotAPolicy,
  NoQualifyingParagraphs,
  NoController,
  MissingTruth,
  AllZero,
  FormatError,
  MissingResolution,
  CycleDetected,
  AmbiguousParent,
  InvalidDomain,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view errc_name(Errc code);
// Inverse of errc_name; unknown names map to TransportFailure.
Errc errc_from_name(std::string_view name);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace orgtrace
