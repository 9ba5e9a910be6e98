#include "mric/patchset.hpp"

#include <cstdio>
#include <fstream>

#include "mric/image_io.hpp"
#include "mric/parallel.hpp"
#include "mric/rng.hpp"

namespace mric {

namespace {

ImageGray rotate_cw(const ImageGray& in, int quarter_turns) {
    if (quarter_turns == 0) return in;
    ImageGray out;
    switch (quarter_turns) {
        case 1: // (y,x) <- (h-1-x, y)
            out = ImageGray(in.w, in.h);
            for (int y = 0; y < out.h; ++y) {
                for (int x = 0; x < out.w; ++x) {
                    out.at(y, x) = in.at(in.h - 1 - x, y);
                }
            }
            return out;
        case 2:
            out = ImageGray(in.h, in.w);
            for (int y = 0; y < out.h; ++y) {
                for (int x = 0; x < out.w; ++x) {
                    out.at(y, x) = in.at(in.h - 1 - y, in.w - 1 - x);
                }
            }
            return out;
        case 3:
            out = ImageGray(in.w, in.h);
            for (int y = 0; y < out.h; ++y) {
                for (int x = 0; x < out.w; ++x) {
                    out.at(y, x) = in.at(x, in.w - 1 - y);
                }
            }
            return out;
        default:
            throw ValidationError("rotation must be a multiple of 90 degrees");
    }
}

ImageGray flip_horizontal(const ImageGray& in) {
    ImageGray out(in.h, in.w);
    for (int y = 0; y < in.h; ++y) {
        for (int x = 0; x < in.w; ++x) out.at(y, x) = in.at(y, in.w - 1 - x);
    }
    return out;
}

} // namespace

ImageGray apply_patch_record(const ImageGray& source, const PatchRecord& rec,
                             int patch) {
    if (rec.x < 0 || rec.y < 0 || rec.x + patch > source.w ||
        rec.y + patch > source.h) {
        throw ValidationError("patch record out of bounds");
    }
    ImageGray crop(patch, patch);
    for (int y = 0; y < patch; ++y) {
        const float* src = source.row(rec.y + y) + rec.x;
        std::copy(src, src + patch, crop.row(y));
    }
    ImageGray rotated = rotate_cw(crop, (rec.rot_deg / 90) % 4);
    return rec.flip ? flip_horizontal(rotated) : rotated;
}

PatchSet build_patchset(const std::vector<ImageGray>& images, int patch,
                        int target_count, uint64_t seed) {
    if (patch < 16) throw ValidationError("patch size must be at least 16");
    if (images.empty()) throw ValidationError("no source images");
    if (target_count < static_cast<int>(images.size())) {
        throw ValidationError("target_count must be at least the image count");
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        if (images[i].h < patch || images[i].w < patch) {
            throw ValidationError("image " + std::to_string(i) +
                                  " is smaller than the patch size (" +
                                  std::to_string(images[i].h) + "x" +
                                  std::to_string(images[i].w) + " < " +
                                  std::to_string(patch) + ")");
        }
    }

    PatchSet set;
    set.patch = patch;
    set.patches.resize(target_count);
    set.manifest.resize(target_count);
    parallel_for(0, static_cast<std::size_t>(target_count), [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        const auto src = rng.uniform_index(images.size());
        const ImageGray& img = images[src];
        PatchRecord rec;
        rec.source_id = static_cast<int>(src);
        rec.y = static_cast<int>(rng.uniform_index(img.h - patch + 1));
        rec.x = static_cast<int>(rng.uniform_index(img.w - patch + 1));
        rec.rot_deg = static_cast<int>(rng.uniform_index(4)) * 90;
        rec.flip = rng.coin();
        set.manifest[i] = rec;
        set.patches[i] = apply_patch_record(img, rec, patch);
    });
    return set;
}

void save_patchset(const PatchSet& set, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt", std::ios::trunc);
    if (!manifest) throw IoError("cannot write manifest: " + dir.string());
    for (std::size_t i = 0; i < set.patches.size(); ++i) {
        const ImageGray& p = set.patches[i];
        Image8 img8(p.h, p.w);
        for (std::size_t j = 0; j < p.size(); ++j) {
            float v = p.v[j];
            if (v < 0.f) v = 0.f;
            if (v > 1.f) v = 1.f;
            img8.v[j] = static_cast<uint8_t>(v * 255.f + 0.5f);
        }
        char name[32];
        std::snprintf(name, sizeof(name), "patch_%06zu.png", i);
        save_png_gray8(dir / name, img8);
        const PatchRecord& r = set.manifest[i];
        manifest << r.source_id << ',' << r.x << ',' << r.y << ',' << r.rot_deg
                 << ',' << (r.flip ? 1 : 0) << '\n';
    }
    if (!manifest) throw IoError("write failed: " + dir.string());
}

PatchSet load_patchset(const std::filesystem::path& dir) {
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest) throw IoError("cannot read manifest: " + dir.string());
    PatchSet set;
    std::string line;
    std::size_t i = 0;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        PatchRecord r;
        int flip = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%d", &r.source_id, &r.x,
                        &r.y, &r.rot_deg, &flip) != 5) {
            throw FormatError("bad manifest line: " + line);
        }
        r.flip = flip != 0;
        set.manifest.push_back(r);
        char name[32];
        std::snprintf(name, sizeof(name), "patch_%06zu.png", i++);
        set.patches.push_back(load_image(dir / name));
    }
    if (!set.patches.empty()) set.patch = set.patches.front().h;
    return set;
}

} // namespace mric
