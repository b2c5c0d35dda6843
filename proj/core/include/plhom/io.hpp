#pragma once

#include <string>

#include "plhom/wreath.hpp"

namespace plhom::io {

/// All serializations are deterministic: identical values produce identical
/// bytes, rationals render as "p/q" in lowest terms ("p" when integral),
/// and parse(serialize(x)) == x exactly.

std::string serialize(const PLMap& f);  // [["0","0"],["1/2","1/4"],...]
PLMap parse_plmap(const std::string& text);

std::string serialize(const GroupSpec& G);
GroupSpec parse_group(const std::string& text);

std::string serialize(const TowerCertificate& cert);
TowerCertificate parse_certificate(const std::string& text);

std::string serialize(const WreathRealization& w);

struct ObstructionInput {
  PLMap alpha, beta, gamma;
  ObstructionBounds bounds;
};
ObstructionInput parse_obstruction_input(const std::string& text);
std::string serialize_obstruction_log(const std::vector<ObstructionLogEntry>& log,
                                      const PLMap* final_gamma);

std::string serialize_report(const AnalysisReport& r, const GroupSpec& G);
std::string report_markup(const AnalysisReport& r, const GroupSpec& G);

std::string serialize_orbitals(const GroupSpec& G);

enum class FileKind { PLMapFile, GroupFile, CertificateFile, ObstructionFile };

/// Dispatch on the top-level shape of a JSON document.
FileKind detect_kind(const std::string& text);

}  // namespace plhom::io
