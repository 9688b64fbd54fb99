#include "reidkit/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

namespace reidkit {

namespace {

std::string err(const std::filesystem::path& path, const std::string& what) {
    return path.string() + ": " + what;
}

Image make_checked(int w, int h, int c, const std::filesystem::path& path) {
    if (w < 1 || h < 1 || w > (1 << 24) || h > (1 << 24)) {
        throw CorruptData(err(path, "implausible image dimensions"));
    }
    Image img;
    img.width = w;
    img.height = h;
    img.channels = c;
    img.data.resize(static_cast<std::size_t>(w) * h * c);
    return img;
}

// ---- PNM (PPM P6 / PGM P5) ----

int pnm_next_int(std::istream& in, const std::filesystem::path& path) {
    // Skips whitespace and '#' comments between header fields.
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (std::isspace(ch)) {
            ch = in.get();
        } else {
            break;
        }
    }
    if (ch == EOF || !std::isdigit(ch)) throw CorruptData(err(path, "truncated or malformed header"));
    long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > (1L << 30)) throw CorruptData(err(path, "header field out of range"));
        ch = in.get();
    }
    if (ch != EOF) in.unget();
    return static_cast<int>(value);
}

Image load_pnm(std::istream& in, const std::filesystem::path& path, int channels) {
    const int w = pnm_next_int(in, path);
    const int h = pnm_next_int(in, path);
    const int maxval = pnm_next_int(in, path);
    if (maxval != 255) throw UnsupportedFormat(err(path, "only maxval 255 is supported"));
    const int sep = in.get();
    if (sep == EOF || !std::isspace(sep)) throw CorruptData(err(path, "missing header terminator"));

    Image img = make_checked(w, h, channels, path);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (static_cast<std::size_t>(in.gcount()) != img.data.size()) {
        throw CorruptData(err(path, "truncated pixel data"));
    }
    return img;
}

void save_pnm(const Image& img, const std::filesystem::path& path, const char* magic) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(err(path, "cannot open for writing"));
    out << magic << "\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw IoError(err(path, "write failed"));
}

// ---- PNG via the libpng simplified API ----

Image load_png(const std::filesystem::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str())) {
        throw CorruptData(err(path, png.message));
    }
    const bool gray = (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
    png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    Image img = make_checked(static_cast<int>(png.width), static_cast<int>(png.height),
                             gray ? 1 : 3, path);
    if (!png_image_finish_read(&png, nullptr, img.data.data(), 0, nullptr)) {
        png_image_free(&png);
        throw CorruptData(err(path, png.message));
    }
    return img;
}

void save_png(const Image& img, const std::filesystem::path& path) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width);
    png.height = static_cast<png_uint_32>(img.height);
    png.format = img.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, img.data.data(), 0, nullptr)) {
        throw IoError(err(path, png.message));
    }
}

// ---- JPEG via libjpeg ----

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, mgr->message);
    std::longjmp(mgr->jump, 1);
}

struct FileCloser {
    std::FILE* f = nullptr;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

Image load_jpeg(const std::filesystem::path& path) {
    FileCloser file;
    file.f = std::fopen(path.string().c_str(), "rb");
    if (!file.f) throw IoError(err(path, "cannot open"));

    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;

    Image img;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw CorruptData(err(path, jerr.message));
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, file.f);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    img = make_checked(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height),
                       cinfo.output_components, path);
    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = img.data.data() + stride * cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

void save_jpeg(const Image& img, const std::filesystem::path& path, int quality = 95) {
    FileCloser file;
    file.f = std::fopen(path.string().c_str(), "wb");
    if (!file.f) throw IoError(err(path, "cannot open for writing"));

    jpeg_compress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_compress(&cinfo);
        throw IoError(err(path, jerr.message));
    }
    jpeg_create_compress(&cinfo);
    jpeg_stdio_dest(&cinfo, file.f);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = img.channels;
    cinfo.in_color_space = img.channels == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);

    const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
    while (cinfo.next_scanline < cinfo.image_height) {
        JSAMPROW row = const_cast<JSAMPROW>(img.data.data() + stride * cinfo.next_scanline);
        jpeg_write_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(err(path, "cannot open"));
    unsigned char magic[8] = {};
    in.read(reinterpret_cast<char*>(magic), sizeof(magic));
    const std::streamsize got = in.gcount();
    if (got < 2) throw CorruptData(err(path, "file too short"));

    if (magic[0] == 'P' && (magic[1] == '6' || magic[1] == '5')) {
        in.clear();
        in.seekg(2);
        return load_pnm(in, path, magic[1] == '6' ? 3 : 1);
    }
    if (got >= 8 && png_sig_cmp(magic, 0, 8) == 0) {
        in.close();
        return load_png(path);
    }
    if (magic[0] == 0xFF && magic[1] == 0xD8) {
        in.close();
        return load_jpeg(path);
    }
    throw UnsupportedFormat(err(path, "unrecognized image format"));
}

void save_image(const Image& img, const std::filesystem::path& path) {
    if (!img.valid()) throw std::invalid_argument("save_image: invalid image");
    const std::string ext = lower_extension(path);
    if (ext == ".ppm") {
        if (img.channels != 3) throw UnsupportedFormat(err(path, "PPM requires 3 channels"));
        save_pnm(img, path, "P6");
    } else if (ext == ".pgm") {
        if (img.channels != 1) throw UnsupportedFormat(err(path, "PGM requires 1 channel"));
        save_pnm(img, path, "P5");
    } else if (ext == ".png") {
        save_png(img, path);
    } else if (ext == ".jpg" || ext == ".jpeg") {
        save_jpeg(img, path);
    } else {
        throw UnsupportedFormat(err(path, "unsupported output extension"));
    }
}

void save_mask_pgm(const PolygonMask& mask, int img_w, int img_h,
                   const std::filesystem::path& path) {
    Image img = Image::make(img_w, img_h, 1, 0);
    for (int y = mask.box.y0; y <= mask.box.y1; ++y) {
        for (int x = mask.box.x0; x <= mask.box.x1; ++x) {
            if (mask.covered_at(x, y)) img.at(x, y, 0) = 255;
        }
    }
    save_pnm(img, path, "P5");
}

bool is_image_file(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".ppm" || ext == ".pgm" || ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace reidkit
