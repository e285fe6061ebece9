#include "mapl/lexicon.hpp"

#include <fstream>

#include "mapl/error.hpp"
#include "mapl/text.hpp"

namespace mapl {

namespace {

const std::vector<std::string> kDecoyWords = {
    "abacus", "airport", "algebra", "alley", "alloy", "almond",
    "altitude", "amber", "anchor", "antenna", "anvil", "apricot",
    "arcade", "architect", "archive", "arena", "asteroid", "atlas",
    "atom", "aurora", "avenue", "axe", "bacon", "badger",
    "bagel", "baker", "bakery", "balcony", "ballad", "banana",
    "bank", "banker", "banner", "barber", "barley", "barrel",
    "basil", "basket", "bazaar", "beacon", "beaker", "beaver",
    "bell", "biscuit", "bison", "blade", "blueprint", "bolt",
    "botanist", "bottle", "brandy", "broth", "bucket", "bugle",
    "builder", "bureau", "burger", "butcher", "butter", "button",
    "cabbage", "cable", "cadence", "cafe", "camel", "camera",
    "campus", "canal", "candle", "candy", "canvas", "captain",
    "caramel", "caravan", "carnival", "carpenter", "carrot", "cashew",
    "cashier", "castle", "catalog", "celery", "cellar", "census",
    "ceramic", "chain", "chapel", "charcoal", "cheese", "cheetah",
    "chemist", "cherry", "chili", "chisel", "chocolate", "chorus",
    "cider", "cinema", "cinnamon", "cipher", "circuit", "circus",
    "citadel", "clerk", "clinic", "coach", "cobalt", "cobra",
    "cocoa", "coconut", "coffee", "college", "comet", "compass",
    "compost", "condor", "cookie", "copper", "coral", "corn",
    "corridor", "courtyard", "coyote", "cracker", "crane", "crate",
    "cream", "crowbar", "crumb", "crystal", "cupcake", "curry",
    "cushion", "custard", "cyclone", "dagger", "dancer", "decade",
    "dentist", "depot", "diagram", "dial", "diamond", "dock",
    "doctor", "dolphin", "dome", "donkey", "drill", "driver",
    "drum", "dumpling", "dynamo", "eagle", "easel", "eclipse",
    "editor", "elevator", "embassy", "ember", "emerald", "enamel",
    "engine", "engineer", "equator", "fabric", "factory", "falcon",
    "fanfare", "fathom", "faucet", "ferret", "fig", "flask",
    "flint", "florist", "fountain", "foyer", "fresco", "frontier",
    "funnel", "gadget", "galaxy", "garage", "gardener", "garlic",
    "garnet", "garrison", "gate", "gauge", "gazelle", "gear",
    "gecko", "geologist", "geyser", "ginger", "glacier", "globe",
    "gorilla", "granite", "grape", "gravel", "gravy", "guard",
    "guava", "gym", "ham", "hammer", "handle", "hangar",
    "harbor", "hazelnut", "helium", "heron", "hinge", "horizon",
    "hose", "hospital", "hostel", "hotel", "hyena", "iguana",
    "incense", "ingot", "island", "ivory", "jackal", "jade",
    "jaguar", "jelly", "jigsaw", "jubilee", "judge", "jug",
    "juggler", "keel", "ketchup", "kettle", "kiln", "kiosk",
    "koala", "labyrinth", "ladder", "lagoon", "lamp", "lattice",
    "lava", "lawyer", "ledger", "legend", "lemon", "lemur",
    "lens", "lentil", "leopard", "lettuce", "lever", "librarian",
    "library", "lighthouse", "lilac", "limestone", "lizard", "llama",
    "lobby", "lobster", "locket", "locomotive", "lynx", "macaw",
    "magnet", "magpie", "mall", "mallet", "mango", "manor",
    "mantis", "maple", "marble", "market", "marmot", "mason",
    "mechanic", "melon", "mercury", "messenger", "meteor", "metro",
    "milk", "mint", "mirror", "mole", "monument", "moose",
    "mosaic", "motif", "muffin", "museum", "mushroom", "mustang",
    "mustard", "nebula", "needle", "newt", "nickel", "noodle",
    "nozzle", "nurse", "nutmeg", "oat", "obelisk", "ocelot",
    "octopus", "office", "olive", "onion", "onyx", "opal",
    "orange", "orbit", "osprey", "ostrich", "otter", "owl",
    "oyster", "paddle", "pagoda", "painter", "palace", "pancake",
    "panda", "panther", "papaya", "parchment", "parrot", "pasta",
    "pavilion", "peach", "peanut", "pear", "pedal", "pelican",
    "pencil", "pendulum", "penguin", "pepper", "pickle", "pie",
    "pier", "pigeon", "pigment", "pilot", "pineapple", "pinnacle",
    "piston", "pizza", "plateau", "plaza", "pliers", "plug",
    "plum", "plumber", "poet", "polka", "popcorn", "porter",
    "potato", "pretzel", "printer", "prism", "prison", "pub",
    "pudding", "pulley", "pump", "pumpkin", "pyramid", "python",
    "quarry", "quartz", "quill", "rabbit", "raccoon", "radar",
    "radish", "railway", "raisin", "ranger", "raven", "razor",
    "reef", "relic", "rhino", "ribbon", "rice", "riddle",
    "rink", "rivet", "rocket", "rope", "ruler", "runway",
    "rust", "saddle", "sailor", "salad", "salmon", "salon",
    "salsa", "sandwich", "sapphire", "sardine", "satchel", "satellite",
    "sausage", "saw", "scholar", "scissors", "scorpion", "scroll",
    "sculptor", "seal", "sewer", "shark", "sherbet", "sheriff",
    "shovel", "shrimp", "shutter", "singer", "siren", "sirloin",
    "sloth", "socket", "soldier", "sonnet", "sorbet", "soup",
    "spade", "sparrow", "spinach", "spiral", "spring", "sprocket",
    "squid", "stadium", "stapler", "station", "stencil", "stool",
    "stork", "studio", "suburb", "subway", "sugar", "summit",
    "sundial", "surgeon", "swan", "switch", "syrup", "taco",
    "tailor", "tangerine", "tapestry", "tavern", "tea", "teacher",
    "telescope", "tempest", "temple", "terminal", "theater", "thunder",
    "tiger", "timber", "toad", "toast", "toffee", "tomato",
    "tongs", "topaz", "torch", "tornado", "tower", "trader",
    "trellis", "tripod", "trophy", "trout", "trowel", "truffle",
    "tuna", "tundra", "tunnel", "turbine", "turnip", "turtle",
    "tutor", "umbrella", "valve", "vanilla", "vapor", "vault",
    "velvet", "vertex", "viaduct", "villa", "vinegar", "viper",
    "vise", "volcano",
};

}  // namespace

std::span<const std::string> default_lexicon() { return kDecoyWords; }

std::vector<std::string> load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(Errc::io_error, "cannot open lexicon file: " + path);
    std::vector<std::string> words;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string word = normalize_token(line);
        if (word.empty())
            raise(Errc::malformed_input,
                  "lexicon " + path + ": line " + std::to_string(line_no) + " is not a word");
        words.push_back(std::move(word));
    }
    if (words.empty()) raise(Errc::malformed_input, "lexicon " + path + " is empty");
    return words;
}

}  // namespace mapl
