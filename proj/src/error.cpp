#include "orgtrace/error.hpp"

#include <array>
#include <utility>

namespace orgtrace {

namespace {

constexpr std::array<std::pair<Errc, std::string_view>, 38> kNames{{
    {Errc::EmptyInput, "EmptyInput"},
    {Errc::IllegalLabel, "IllegalLabel"},
    {Errc::IsPublicSuffix, "IsPublicSuffix"},
    {Errc::NoLabels, "NoLabels"},
    {Errc::EmptyAfterNormalization, "EmptyAfterNormalization"},
    {Errc::BudgetExhausted, "BudgetExhausted"},
    {Errc::Timeout, "Timeout"},
    {Errc::TooManyRedirects, "TooManyRedirects"},
    {Errc::ReplayMiss, "ReplayMiss"},
    {Errc::TransportFailure, "TransportFailure"},
    {Errc::ProviderUnavailable, "ProviderUnavailable"},
    {Errc::ArchiveCorrupt, "ArchiveCorrupt"},
    {Errc::NoServerForTld, "NoServerForTld"},
    {Errc::EmptyResponse, "EmptyResponse"},
    {Errc::NoTls, "NoTls"},
    {Errc::HandshakeFailure, "HandshakeFailure"},
    {Errc::Unreachable, "Unreachable"},
    {Errc::NoCandidates, "NoCandidates"},
    {Errc::EmptyDocument, "EmptyDocument"},
    {Errc::TooShort, "TooShort"},
    {Errc::Indeterminate, "Indeterminate"},
    {Errc::NotEnglish, "NotEnglish"},
    {Errc::SingleClassCorpus, "SingleClassCorpus"},
    {Errc::EmptyCorpus, "EmptyCorpus"},
    {Errc::EmptyText, "EmptyText"},
    {Errc::NotAPolicy, "NotAPolicy"},
    {Errc::NoQualifyingParagraphs, "NoQualifyingParagraphs"},
    {Errc::NoController, "NoController"},
    {Errc::MissingTruth, "MissingTruth"},
    {Errc::AllZero, "AllZero"},
    {Errc::FormatError, "FormatError"},
    {Errc::MissingResolution, "MissingResolution"},
    {Errc::CycleDetected, "CycleDetected"},
    {Errc::AmbiguousParent, "AmbiguousParent"},
    {Errc::InvalidDomain, "InvalidDomain"},
    {Errc::InvalidArgument, "InvalidArgument"},
    {Errc::ConfigError, "ConfigError"},
    {Errc::IoError, "IoError"},
}};

}  // namespace

std::string_view errc_name(Errc code) {
  for (const auto& [c, name] : kNames) {
    if (c == code) return name;
  }
  return "Unknown";
}

Errc errc_from_name(std::string_view name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return Errc::TransportFailure;
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

}  // namespace orgtrace
