#pragma once

#include <filesystem>

#include "fringe/field.hpp"

// Field file I/O.
//
//   pfm  Portable float map, "Pf" grayscale variant, float32 payload, rows
//        stored bottom-to-top, negative scale = little-endian. Save writes
//        scale -1.0; load honours the scale's sign (endianness) and
//        multiplies samples by its magnitude. save-then-load is bit-exact for
//        float32-representable samples; load-then-save is byte-identical.
//   png  8-bit grayscale. Save quantizes round(clamp(v,0,1)*255); load maps
//        back to [0,1]. Round trip is within 1/255 per sample for data
//        already in [0,1].
//   csv  One text row per image row, comma separated, %.17g (lossless for
//        doubles).
//
// Malformed input raises fringe::data_error with the byte offset of the
// failure. Non-finite samples are rejected before any save.
namespace fringe {

enum class FieldFormat { Pfm, Png, Csv };

// Picks the format from the file extension (.pfm/.png/.csv, case-insensitive).
// Unknown extension raises data_error.
FieldFormat format_from_extension(const std::filesystem::path& path);

ScalarField load_field(const std::filesystem::path& path, FieldFormat format);
ScalarField load_field(const std::filesystem::path& path);  // by extension

void save_field(const ScalarField& f, const std::filesystem::path& path, FieldFormat format);
void save_field(const ScalarField& f, const std::filesystem::path& path);  // by extension

}  // namespace fringe
