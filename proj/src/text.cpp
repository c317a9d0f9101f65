#include "masar/text.hpp"

#include <cctype>

namespace masar::text {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string collapse_whitespace(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_ws = true;
            continue;
        }
        if (in_ws && !out.empty()) out += ' ';
        in_ws = false;
        out += c;
    }
    return out;
}

std::uint32_t utf8_next(const std::string& s, size_t& i) {
    const auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    auto cont = [&](size_t k) { return k < s.size() && (byte(k) & 0xC0) == 0x80; };
    if ((b0 & 0xE0) == 0xC0 && cont(i + 1)) {
        std::uint32_t cp = ((b0 & 0x1Fu) << 6) | (byte(i + 1) & 0x3Fu);
        i += 2;
        return cp;
    }
    if ((b0 & 0xF0) == 0xE0 && cont(i + 1) && cont(i + 2)) {
        std::uint32_t cp = ((b0 & 0x0Fu) << 12) | ((byte(i + 1) & 0x3Fu) << 6) | (byte(i + 2) & 0x3Fu);
        i += 3;
        return cp;
    }
    if ((b0 & 0xF8) == 0xF0 && cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        std::uint32_t cp = ((b0 & 0x07u) << 18) | ((byte(i + 1) & 0x3Fu) << 12) |
                           ((byte(i + 2) & 0x3Fu) << 6) | (byte(i + 3) & 0x3Fu);
        i += 4;
        return cp;
    }
    ++i;
    return 0xFFFD;
}

void utf8_append(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

std::vector<std::uint32_t> utf8_decode(const std::string& s) {
    std::vector<std::uint32_t> cps;
    cps.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) cps.push_back(utf8_next(s, i));
    return cps;
}

namespace {

bool is_arabic_diacritic(std::uint32_t cp) {
    // harakat + Quranic annotation marks + superscript alef
    if (cp >= 0x064B && cp <= 0x065F) return true;
    if (cp == 0x0670) return true;
    if (cp >= 0x06D6 && cp <= 0x06ED) return true;
    if (cp >= 0x0610 && cp <= 0x061A) return true;
    return false;
}

std::uint32_t fold_codepoint(std::uint32_t cp) {
    switch (cp) {
        case 0x0622:  // آ
        case 0x0623:  // أ
        case 0x0625:  // إ
        case 0x0671:  // ٱ
            return 0x0627;  // ا
        case 0x0624:  // ؤ
            return 0x0648;  // و
        case 0x0626:  // ئ
        case 0x0649:  // ى
            return 0x064A;  // ي
        case 0x0629:  // ة
            return 0x0647;  // ه
        default:
            return cp;
    }
}

bool is_token_char(std::uint32_t cp) {
    if (cp < 0x80)
        return std::isalnum(static_cast<int>(cp)) != 0;
    // Arabic letters (post-normalization the diacritics are gone already)
    if (cp >= 0x0620 && cp <= 0x064A) return true;
    if (cp >= 0x0660 && cp <= 0x0669) return true;
    if (cp >= 0x066E && cp <= 0x06D3) return true;
    // Everything else alphabetic outside ASCII: treat Latin-1 letters as token chars.
    if (cp >= 0x00C0 && cp <= 0x024F) return true;
    return false;
}

}  // namespace

std::string normalize_arabic(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        std::uint32_t cp = utf8_next(s, i);
        if (is_arabic_diacritic(cp)) continue;
        if (cp == 0x0640) continue;  // tatweel
        if (cp >= 0x0660 && cp <= 0x0669) {  // ٠-٩
            out += static_cast<char>('0' + (cp - 0x0660));
            continue;
        }
        if (cp >= 0x06F0 && cp <= 0x06F9) {  // ۰-۹
            out += static_cast<char>('0' + (cp - 0x06F0));
            continue;
        }
        cp = fold_codepoint(cp);
        if (cp < 0x80) {
            out += static_cast<char>(std::tolower(static_cast<int>(cp)));
            continue;
        }
        utf8_append(out, cp);
    }
    return out;
}

std::vector<std::string> tokenize(const std::string& s) {
    std::vector<std::string> tokens;
    std::string current;
    size_t i = 0;
    while (i < s.size()) {
        size_t start = i;
        std::uint32_t cp = utf8_next(s, i);
        if (is_token_char(cp)) {
            current.append(s, start, i - start);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> normalize_and_tokenize(const std::string& s) {
    return tokenize(normalize_arabic(s));
}

bool contains_normalized(const std::string& haystack, const std::string& needle) {
    return normalize_arabic(haystack).find(normalize_arabic(needle)) != std::string::npos;
}

}  // namespace masar::text
