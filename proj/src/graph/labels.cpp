#include "webeco/graph/labels.hpp"

#include <algorithm>
#include <cctype>
#include <istream>

#include "webeco/csv.hpp"
#include "webeco/error.hpp"

namespace webeco::graph {

namespace {

std::string lower_trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

CategoryLabel::CategoryLabel(Category category, std::optional<Subcategory> subcategory)
    : category_(category), subcategory_(subcategory) {
    if ((category == Category::Conspiracy) != subcategory.has_value()) {
        throw ArgumentError("a subcategory is required for conspiracy labels and forbidden otherwise");
    }
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Conspiracy: return "conspiracy";
        case Category::Misinformation: return "misinformation";
        case Category::Authentic: return "authentic";
        case Category::NonNews: return "nonnews";
        case Category::Unlabeled: return "unlabeled";
    }
    return "unlabeled";
}

std::string_view to_string(Subcategory s) {
    switch (s) {
        case Subcategory::QAnon: return "qanon";
        case Subcategory::COVID: return "covid";
        case Subcategory::UFO: return "ufo";
        case Subcategory::NineEleven: return "nineeleven";
        case Subcategory::FlatEarth: return "flatearth";
    }
    return "";
}

std::optional<Category> parse_category(std::string_view text) {
    const std::string t = lower_trim(text);
    for (Category c : kAllCategories) {
        if (t == to_string(c)) return c;
    }
    return std::nullopt;
}

std::optional<Subcategory> parse_subcategory(std::string_view text) {
    const std::string t = lower_trim(text);
    for (Subcategory s : kAllSubcategories) {
        if (t == to_string(s)) return s;
    }
    return std::nullopt;
}

Group parse_group(std::string_view text) {
    if (auto c = parse_category(text)) return *c;
    if (auto s = parse_subcategory(text)) return *s;
    throw ArgumentError("unknown category or subcategory '" + std::string(text) + "'");
}

std::string to_string(const Group& group) {
    return std::visit([](auto g) { return std::string(to_string(g)); }, group);
}

bool group_contains(const Group& group, const CategoryLabel& label) {
    if (const auto* c = std::get_if<Category>(&group)) return label.category() == *c;
    return label.subcategory() == std::get<Subcategory>(group);
}

LabelTable read_labels_csv(std::istream& in) {
    LabelTable table;
    csv::read(in, {"domain", "category", "subcategory"},
              [&](const std::vector<std::string>& row, std::size_t line) {
                  const std::string domain = lower_trim(row[0]);
                  if (domain.empty()) throw ParseError("labels.csv line " + std::to_string(line) + ": empty domain");
                  const auto category = parse_category(row[1]);
                  if (!category || *category == Category::Unlabeled) {
                      throw ParseError("labels.csv line " + std::to_string(line) + ": unknown category '" +
                                       row[1] + "'");
                  }
                  std::optional<Subcategory> sub;
                  if (!lower_trim(row[2]).empty()) {
                      sub = parse_subcategory(row[2]);
                      if (!sub) {
                          throw ParseError("labels.csv line " + std::to_string(line) +
                                           ": unknown subcategory '" + row[2] + "'");
                      }
                  }
                  try {
                      table[domain] = CategoryLabel(*category, sub);
                  } catch (const ArgumentError& e) {
                      throw ParseError("labels.csv line " + std::to_string(line) + ": " + e.what());
                  }
              });
    return table;
}

}  // namespace webeco::graph
