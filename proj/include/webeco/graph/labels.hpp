#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace webeco::graph {

enum class Category { Conspiracy, Misinformation, Authentic, NonNews, Unlabeled };

enum class Subcategory { QAnon, COVID, UFO, NineEleven, FlatEarth };

inline constexpr Category kAllCategories[] = {Category::Conspiracy, Category::Misinformation,
                                              Category::Authentic, Category::NonNews,
                                              Category::Unlabeled};
inline constexpr Subcategory kAllSubcategories[] = {Subcategory::QAnon, Subcategory::COVID,
                                                    Subcategory::UFO, Subcategory::NineEleven,
                                                    Subcategory::FlatEarth};

/// Invariant: subcategory is set iff category == Conspiracy.
class CategoryLabel {
public:
    CategoryLabel() = default;
    /// Throws ArgumentError when the subcategory/category combination is invalid.
    CategoryLabel(Category category, std::optional<Subcategory> subcategory = std::nullopt);

    Category category() const { return category_; }
    std::optional<Subcategory> subcategory() const { return subcategory_; }

    bool operator==(const CategoryLabel&) const = default;

private:
    Category category_ = Category::Unlabeled;
    std::optional<Subcategory> subcategory_;
};

std::string_view to_string(Category c);
std::string_view to_string(Subcategory s);
/// Accepts the labels.csv spellings (conspiracy, misinformation, authentic, nonnews).
std::optional<Category> parse_category(std::string_view text);
/// Accepts qanon, covid, ufo, nineeleven, flatearth.
std::optional<Subcategory> parse_subcategory(std::string_view text);

/// A set of domains selected either by category or by conspiracy subcategory.
using Group = std::variant<Category, Subcategory>;

/// Parses a category or subcategory name. Throws ArgumentError.
Group parse_group(std::string_view text);
std::string to_string(const Group& group);
bool group_contains(const Group& group, const CategoryLabel& label);

using LabelTable = std::map<std::string, CategoryLabel, std::less<>>;

/// labels.csv: domain,category,subcategory. Domains are lowercased. Throws ParseError.
/// Conspiracy rows with an empty subcategory are rejected, as are non-conspiracy rows
/// with one.
LabelTable read_labels_csv(std::istream& in);

}  // namespace webeco::graph
