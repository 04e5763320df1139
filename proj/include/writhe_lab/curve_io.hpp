#pragma once

#include <optional>
#include <string>
#include <vector>

#include "writhe_lab/curves.hpp"
#include "writhe_lab/invariants.hpp"
#include "writhe_lab/reconnection.hpp"

namespace writhe_lab {

/// One component as stored in a curve file: always a closed vertex loop,
/// optionally framed, optionally carrying a flux.
struct StoredComponent {
    std::vector<Point3> vertices;
    std::optional<std::vector<Vec3>> framing;
    std::optional<double> flux;
};

struct StoredSystem {
    std::vector<StoredComponent> components;

    CurveSystem curves() const;
};

/// Reads a "writhe-lab-curves" JSON document. Parse errors carry the byte
/// offset reported by the parser.
StoredSystem read_curve_file(const std::string& path);
StoredSystem parse_curves(const std::string& text);

/// Writes the document with coordinates serialized at 17 significant digits,
/// so parse(write(x)) reproduces every double bit-exactly.
void write_curve_file(const std::string& path, const StoredSystem& system);
std::string format_curves(const StoredSystem& system);

std::string format_helicity_report(const HelicityReport& report, int indent = 2);
std::string format_ledger(const ReconnectionLedger& ledger, int indent = 2);
std::string format_projection_report(const ProjectionReport& report, int indent = 2);

/// Shortest decimal that round-trips the double (17 significant digits).
std::string format_double(double v);

}  // namespace writhe_lab
