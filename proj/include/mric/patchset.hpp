#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mric/image.hpp"

namespace mric {

// One augmentation record; replaying it against the source image
// reproduces its patch exactly. rot_deg in {0, 90, 180, 270} (clockwise),
// applied after the crop, horizontal flip applied last.
struct PatchRecord {
    int source_id = 0;
    int x = 0; // crop column offset
    int y = 0; // crop row offset
    int rot_deg = 0;
    bool flip = false;
};

struct PatchSet {
    int patch = 0; // square size P
    std::vector<ImageGray> patches;
    std::vector<PatchRecord> manifest;
};

// Deterministic given the seed: patch i's crop/rotation/flip parameters
// are derived from hash(seed, i), so construction order never matters.
// Throws ValidationError naming the first image smaller than P in either
// dimension.
PatchSet build_patchset(const std::vector<ImageGray>& images, int patch,
                        int target_count, uint64_t seed);

ImageGray apply_patch_record(const ImageGray& source, const PatchRecord& rec,
                             int patch);

// Disk cache: one 8-bit PNG per patch plus manifest.txt with lines
// `source_id,x,y,rot,flip`.
void save_patchset(const PatchSet& set, const std::filesystem::path& dir);
PatchSet load_patchset(const std::filesystem::path& dir);

} // namespace mric
