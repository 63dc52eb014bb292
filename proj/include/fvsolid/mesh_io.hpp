#pragma once

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fvsolid/core.hpp"
#include "fvsolid/mesh.hpp"

namespace fvsolid {

namespace detail {

// Whitespace-separated token stream with line tracking; '#' starts a comment
// to end-of-line.
class TokenReader {
public:
    explicit TokenReader(std::istream& in, std::string source)
        : in_(in), source_(std::move(source)) {}

    bool next(std::string& tok) {
        for (;;) {
            if (pos_ >= line_.size()) {
                if (!std::getline(in_, line_)) return false;
                ++lineNo_;
                pos_ = 0;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(line_[pos_]))) {
                ++pos_;
                continue;
            }
            if (line_[pos_] == '#') {
                pos_ = line_.size();
                continue;
            }
            std::size_t start = pos_;
            while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_])) &&
                   line_[pos_] != '#')
                ++pos_;
            tok = line_.substr(start, pos_ - start);
            return true;
        }
    }

    std::string expect(const std::string& what) {
        std::string tok;
        if (!next(tok)) fail("unexpected end of file, expected " + what);
        return tok;
    }

    int expectInt(const std::string& what) {
        const std::string tok = expect(what);
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(tok, &used);
        } catch (const std::exception&) {
            fail("expected integer for " + what + ", got '" + tok + "'");
        }
        if (used != tok.size()) fail("expected integer for " + what + ", got '" + tok + "'");
        return v;
    }

    double expectDouble(const std::string& what) {
        const std::string tok = expect(what);
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            fail("expected number for " + what + ", got '" + tok + "'");
        }
        if (used != tok.size()) fail("expected number for " + what + ", got '" + tok + "'");
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(source_ + ":" + std::to_string(lineNo_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string source_;
    std::string line_;
    std::size_t pos_ = 0;
    int lineNo_ = 0;
};

}  // namespace detail

/// Parses the self-describing mesh text format: sections points, faces,
/// owner, neighbour, patches in that order, each led by a count. Indices are
/// 0-based. The cell count is implied by the owner/neighbour contents.
inline PolyMesh readMesh(std::istream& in, const std::string& source = "<mesh>") {
    detail::TokenReader r(in, source);
    PolyMesh mesh;

    const auto expectKeyword = [&](const char* kw) {
        const std::string tok = r.expect(std::string("section keyword '") + kw + "'");
        if (tok != kw) r.fail("expected section '" + std::string(kw) + "', got '" + tok + "'");
    };

    expectKeyword("points");
    const int nPoints = r.expectInt("points count");
    if (nPoints < 0) r.fail("negative points count");
    mesh.points.resize(nPoints);
    for (int i = 0; i < nPoints; ++i) {
        mesh.points[i].x = r.expectDouble("point coordinate");
        mesh.points[i].y = r.expectDouble("point coordinate");
        mesh.points[i].z = r.expectDouble("point coordinate");
    }

    expectKeyword("faces");
    const int nFaces = r.expectInt("faces count");
    if (nFaces < 0) r.fail("negative faces count");
    mesh.faces.resize(nFaces);
    for (int f = 0; f < nFaces; ++f) {
        const int k = r.expectInt("face point count");
        if (k < 3) r.fail("face " + std::to_string(f) + " has fewer than 3 points");
        mesh.faces[f].resize(k);
        for (int i = 0; i < k; ++i) {
            const int idx = r.expectInt("face point index");
            if (idx < 0 || idx >= nPoints)
                r.fail("face " + std::to_string(f) + ": point index " + std::to_string(idx) +
                       " out of range [0," + std::to_string(nPoints) + ")");
            mesh.faces[f][i] = idx;
        }
    }

    expectKeyword("owner");
    const int nOwner = r.expectInt("owner count");
    if (nOwner != nFaces)
        r.fail("owner count " + std::to_string(nOwner) + " does not match face count " +
               std::to_string(nFaces));
    mesh.owner.resize(nOwner);
    for (int f = 0; f < nOwner; ++f) mesh.owner[f] = r.expectInt("owner cell index");

    expectKeyword("neighbour");
    const int nNeighbour = r.expectInt("neighbour count");
    if (nNeighbour < 0 || nNeighbour > nFaces)
        r.fail("neighbour count " + std::to_string(nNeighbour) +
               " exceeds face count " + std::to_string(nFaces));
    mesh.neighbour.resize(nNeighbour);
    for (int f = 0; f < nNeighbour; ++f) mesh.neighbour[f] = r.expectInt("neighbour cell index");

    expectKeyword("patches");
    const int nPatches = r.expectInt("patches count");
    if (nPatches < 0) r.fail("negative patches count");
    mesh.patches.resize(nPatches);
    int covered = 0;
    for (int p = 0; p < nPatches; ++p) {
        auto& patch = mesh.patches[p];
        patch.name = r.expect("patch name");
        const std::string kind = r.expect("patch kind");
        const auto parsed = patchKindFromString(kind);
        if (!parsed)
            r.fail("patch " + patch.name + ": unknown kind '" + kind +
                   "' (expected fixedDisplacement, traction or symmetry)");
        patch.kind = *parsed;
        patch.startFace = r.expectInt("patch startFace");
        patch.faceCount = r.expectInt("patch faceCount");
        if (patch.startFace < nNeighbour)
            r.fail("patch " + patch.name + " overlaps internal faces: startFace " +
                   std::to_string(patch.startFace) + " < neighbour count " +
                   std::to_string(nNeighbour));
        if (patch.startFace + patch.faceCount > nFaces)
            r.fail("patch " + patch.name + " extends past the face list");
        covered += patch.faceCount;
    }
    if (nNeighbour + covered != nFaces)
        r.fail("neighbour length " + std::to_string(nNeighbour) +
               " does not match the internal face count " + std::to_string(nFaces - covered) +
               " implied by the patches");

    int maxCell = -1;
    for (int c : mesh.owner) maxCell = std::max(maxCell, c);
    for (int c : mesh.neighbour) maxCell = std::max(maxCell, c);
    mesh.cellCount = maxCell + 1;
    for (int f = 0; f < nOwner; ++f)
        if (mesh.owner[f] < 0) r.fail("owner of face " + std::to_string(f) + " is negative");
    for (int f = 0; f < nNeighbour; ++f)
        if (mesh.neighbour[f] < 0) r.fail("neighbour of face " + std::to_string(f) + " is negative");

    return mesh;
}

inline PolyMesh readMesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open mesh file");
    return readMesh(in, path);
}

inline void writeMesh(const PolyMesh& mesh, std::ostream& out) {
    char buf[96];
    out << "# fvsolid mesh\n";
    out << "points " << mesh.points.size() << "\n";
    for (const auto& p : mesh.points) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x, p.y, p.z);
        out << buf;
    }
    out << "faces " << mesh.faces.size() << "\n";
    for (const auto& f : mesh.faces) {
        out << f.size();
        for (int idx : f) out << ' ' << idx;
        out << "\n";
    }
    out << "owner " << mesh.owner.size() << "\n";
    for (int c : mesh.owner) out << c << "\n";
    out << "neighbour " << mesh.neighbour.size() << "\n";
    for (int c : mesh.neighbour) out << c << "\n";
    out << "patches " << mesh.patches.size() << "\n";
    for (const auto& p : mesh.patches)
        out << p.name << ' ' << toString(p.kind) << ' ' << p.startFace << ' ' << p.faceCount << "\n";
}

inline void writeMesh(const PolyMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(path + ": cannot open mesh file for writing");
    writeMesh(mesh, out);
    if (!out) throw Error(path + ": write failed");
}

inline bool structurallyEqual(const PolyMesh& a, const PolyMesh& b) {
    if (a.cellCount != b.cellCount || a.points.size() != b.points.size() ||
        a.faces != b.faces || a.owner != b.owner || a.neighbour != b.neighbour)
        return false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (!(a.points[i] == b.points[i])) return false;
    if (a.patches.size() != b.patches.size()) return false;
    for (std::size_t i = 0; i < a.patches.size(); ++i) {
        if (a.patches[i].name != b.patches[i].name || a.patches[i].kind != b.patches[i].kind ||
            a.patches[i].startFace != b.patches[i].startFace ||
            a.patches[i].faceCount != b.patches[i].faceCount)
            return false;
    }
    return true;
}

}  // namespace fvsolid
