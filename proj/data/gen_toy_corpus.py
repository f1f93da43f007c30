#!/usr/bin/env python3
"""Writes the bundled toy Java corpus under data/toy_corpus.

Each project has one base class with documented methods and a handful of
subclasses overriding them. Overriding comments name things specific to the
subclass, so they use rarer words than the inherited base comment. Every
project also carries a few members that the miner must skip: undocumented
overrides, private helpers, overrides of classes outside the project, copies
of the parent comment and a non-ASCII comment.

Usage: python3 data/gen_toy_corpus.py [out_dir]
"""

import pathlib
import shutil
import sys
import textwrap

# project -> (package, base class, base methods, subclasses, extras)
# base method: (signature, comment, body)
# subclass: (name, parent, {method name: (comment, body)}, fields)

PROJECTS = [
    (
        "geometry",
        "org.toy.geometry",
        "Shape",
        [
            ("public double area()", "Returns the area of this shape.", "return 0.0;"),
            ("public double perimeter()", "Returns the length of the outline of this shape.", "return 0.0;"),
        ],
        [
            ("Circle", "Shape", {
                "area": ("Returns the area of this circle computed from its radius.",
                         "return Math.PI * radius * radius;"),
                "perimeter": ("Returns the length of the outline of this shape and caches the result.",
                              "return 2 * Math.PI * radius;"),
            }, ["private final double radius;"]),
            ("Rectangle", "Shape", {
                "area": ("Returns the area of this rectangle as width times height.",
                         "return width * height;"),
                "perimeter": ("Returns the length of the outline for the current configuration.",
                              "return 2 * (width + height);"),
            }, ["protected final double width;", "protected final double height;"]),
            ("Triangle", "Shape", {
                "area": ("Returns the area of this triangle using heron's formula.",
                         "double s = perimeter() / 2;\n"
                         "return Math.sqrt(s * (s - a) * (s - b) * (s - c));"),
                "perimeter": ("Returns the length of the outline without allocating memory.",
                              "return a + b + c;"),
            }, ["private final double a, b, c;"]),
            ("Square", "Rectangle", {
                "area": ("Returns the area of this square as the side length squared.",
                         "return width * width;"),
            }, []),
        ],
    ),
    (
        "banking",
        "com.toybank.accounts",
        "Account",
        [
            ("public boolean withdraw(double amount)",
             "Withdraws the given amount from this account.\n"
             "@param amount the amount to take out\n@return true if the balance allowed it",
             "if (amount > balance) {\n  return false;\n}\nbalance -= amount;\nreturn true;"),
            ("public double monthlyFee()", "Returns the fee charged on this account every month.", "return 0.0;"),
        ],
        [
            ("SavingsAccount", "Account", {
                "withdraw": ("Withdraws the given amount unless the savings withdrawal limit for this month is reached.",
                             "if (withdrawalsThisMonth >= 6) {\n  return false;\n}\n"
                             "withdrawalsThisMonth++;\nreturn super.withdraw(amount);"),
                "monthlyFee": ("Returns the fee charged every month and caches the result.",
                               "return balance >= MINIMUM ? 0.0 : 5.0;"),
            }, ["private int withdrawalsThisMonth;", "private static final double MINIMUM = 500.0;"]),
            ("CheckingAccount", "Account", {
                "withdraw": ("Withdraws the given amount, allowing the balance to go negative up to the overdraft limit.",
                             "if (amount > balance + overdraftLimit) {\n  return false;\n}\n"
                             "balance -= amount;\nreturn true;"),
                "monthlyFee": ("Returns the fee charged on this account every month in a thread safe way.",
                               "return 2.5 + overdrafts * 15.0;"),
            }, ["private double overdraftLimit;", "private int overdrafts;"]),
            ("MortgageAccount", "Account", {
                "withdraw": ("Always refuses, since a mortgage account only accepts repayments.",
                             "return false;"),
                "monthlyFee": ("Returns the monthly mortgage installment including interest.",
                               "return principal * rate / (1 - Math.pow(1 + rate, -term));"),
            }, ["private double principal;", "private double rate;", "private int term;"]),
        ],
    ),
    (
        "zoo",
        "zoo.animals",
        "Animal",
        [
            ("public String speak()", "Returns the sound this animal makes.", "return \"...\";"),
            ("public int legs()", "Returns the number of legs of this animal.", "return 4;"),
        ],
        [
            ("Lion", "Animal", {
                "speak": ("Returns the roar of this lion.", "return \"roar\";"),
                "legs": ("Returns the number of legs of this animal as required by the contract.", "return 4;"),
            }, []),
            ("Penguin", "Animal", {
                "speak": ("Returns the squawk this penguin uses to find its colony.", "return \"squawk\";"),
                "legs": ("Returns the number of legs of this animal without allocating memory.", "return 2;"),
            }, []),
            ("Parrot", "Animal", {
                "speak": ("Returns the phrase this parrot has learned to mimic.", "return phrase;"),
                "legs": ("Returns the number of legs and caches the result.", "return 2;"),
            }, ["private String phrase = \"hello\";"]),
            ("Macaw", "Parrot", {
                "speak": ("Returns the phrase this macaw screeches at dawn, louder than other parrots.",
                          "return phrase.toUpperCase() + \"!\";"),
            }, []),
        ],
    ),
    (
        "vehicles",
        "net.toy.transport",
        "Vehicle",
        [
            ("public void start()", "Starts this vehicle.", "running = true;"),
            ("public int maxSpeed()", "Returns the top speed of this vehicle in kilometres per hour.", "return 0;"),
        ],
        [
            ("Bicycle", "Vehicle", {
                "start": ("Starts pedalling this bicycle in the lowest gear.", "gear = 1;\nrunning = true;"),
                "maxSpeed": ("Returns the top speed of this vehicle as required by the contract.", "return 25;"),
            }, ["private int gear;"]),
            ("Truck", "Vehicle", {
                "start": ("Starts this vehicle in a thread safe way.",
                          "glowPlugs.heat();\nengine.ignite();\nrunning = true;"),
                "maxSpeed": ("Returns the governed top speed of this truck, lower when it carries cargo.",
                             "return cargoTons > 0 ? 80 : 90;"),
            }, ["private final Engine engine = new Engine();", "private final GlowPlugs glowPlugs = new GlowPlugs();",
                "private double cargoTons;"]),
            ("Sailboat", "Vehicle", {
                "start": ("Starts this sailboat by hoisting the mainsail.", "mainsail.hoist();\nrunning = true;"),
                "maxSpeed": ("Returns the top speed in kilometres per hour for the current configuration.",
                             "return (int) Math.round(2.43 * Math.sqrt(waterline));"),
            }, ["private final Sail mainsail = new Sail();", "private double waterline;"]),
        ],
    ),
    (
        "storage",
        "io.toystore.cache",
        "Cache",
        [
            ("public Object get(String key)",
             "Returns the value stored under the given key, or null if there is none.",
             "return map.get(key);"),
            ("public void evict()", "Removes one entry from this cache.", "map.clear();"),
        ],
        [
            ("LruCache", "Cache", {
                "get": ("Returns the value stored under the given key in a thread safe way.",
                        "Object v = map.remove(key);\nif (v != null) {\n  map.put(key, v);\n}\nreturn v;"),
                "evict": ("Removes the least recently used entry from this cache.",
                          "String eldest = map.keySet().iterator().next();\nmap.remove(eldest);"),
            }, []),
            ("TtlCache", "Cache", {
                "get": ("Returns the value stored under the given key unless its expiry timestamp has passed.",
                        "Long t = expiry.get(key);\nif (t == null || t < clock.millis()) {\n  return null;\n}\n"
                        "return map.get(key);"),
                "evict": ("Removes one entry from this cache in a thread safe way.",
                          "long now = clock.millis();\nexpiry.entrySet().removeIf(e -> e.getValue() < now);"),
            }, ["private final java.util.Map<String, Long> expiry = new java.util.HashMap<>();",
                "private java.time.Clock clock;"]),
            ("DiskCache", "Cache", {
                "get": ("Returns the value stored under the given key, reading the spill file from disk on a miss.",
                        "Object v = map.get(key);\nreturn v != null ? v : spill.read(key);"),
                "evict": ("Removes one entry from the heap and writes it to the spill file on disk.",
                          "String k = map.keySet().iterator().next();\nspill.write(k, map.remove(k));"),
            }, ["private SpillFile spill;"]),
        ],
    ),
    (
        "parsing",
        "org.toyparse.lex",
        "Tokenizer",
        [
            ("public String nextToken()", "Returns the next token of the input, or null at the end.",
             "return pos < input.length() ? String.valueOf(input.charAt(pos++)) : null;"),
            ("public void reset()", "Moves this tokenizer back to the start of the input.", "pos = 0;"),
        ],
        [
            ("CsvTokenizer", "Tokenizer", {
                "nextToken": ("Returns the next comma separated field, unquoting it if needed.",
                              "int end = input.indexOf(',', pos);\nif (end < 0) {\n  end = input.length();\n}\n"
                              "String field = input.substring(pos, end);\npos = end + 1;\nreturn unquote(field);"),
                "reset": ("Moves this tokenizer back to the first field of the current csv row.",
                          "pos = rowStart;"),
            }, ["private int rowStart;"]),
            ("JsonTokenizer", "Tokenizer", {
                "nextToken": ("Returns the next json token, treating braces, brackets and string literals as units.",
                              "skipWhitespace();\nchar c = input.charAt(pos);\n"
                              "if (c == '{' || c == '}' || c == '[' || c == ']') {\n  pos++;\n  return String.valueOf(c);\n}\n"
                              "return readLiteral();"),
                "reset": ("Moves this tokenizer back to the start of the input as required by the contract.",
                          "pos = 0;\ndepth.clear();"),
            }, ["private final java.util.ArrayDeque<Character> depth = new java.util.ArrayDeque<>();"]),
            ("XmlTokenizer", "Tokenizer", {
                "nextToken": ("Returns the next xml tag or text node, skipping comments and processing instructions.",
                              "skipComments();\nif (input.startsWith(\"<\", pos)) {\n  return readTag();\n}\n"
                              "return readText();"),
                "reset": ("Moves this tokenizer back to the start and forgets the open element names.",
                          "pos = 0;\nopenElements.clear();"),
            }, ["private final java.util.List<String> openElements = new java.util.ArrayList<>();"]),
        ],
    ),
    (
        "logging",
        "dev.toylog.appenders",
        "Appender",
        [
            ("public void append(String message)", "Writes the given message to this appender.", "buffer.add(message);"),
            ("public void flush()", "Flushes any buffered messages of this appender.", "buffer.clear();"),
        ],
        [
            ("ConsoleAppender", "Appender", {
                "append": ("Writes the given message to standard error with an ansi colour for its level.",
                           "System.err.println(colour + message + RESET);"),
                "flush": ("Flushes any buffered messages of this appender in a thread safe way.",
                          "System.err.flush();"),
            }, ["private String colour = \"\";", "private static final String RESET = \"\\u001B[0m\";"]),
            ("FileAppender", "Appender", {
                "append": ("Writes the given message to this appender in a thread safe way.",
                           "if (file.length() > limit) {\n  rotate();\n}\nwriter.println(message);"),
                "flush": ("Flushes the buffered writer of this file appender to disk.",
                          "writer.flush();"),
            }, ["private java.io.File file;", "private java.io.PrintWriter writer;", "private long limit;"]),
            ("SyslogAppender", "Appender", {
                "append": ("Writes the given message as a udp datagram to the syslog daemon.",
                           "byte[] data = (\"<\" + facility + \">\" + message).getBytes();\n"
                           "socket.send(new java.net.DatagramPacket(data, data.length, host, 514));"),
                "flush": ("Flushes any buffered messages for the current configuration.",
                          "socket.getLocalPort();"),
            }, ["private java.net.DatagramSocket socket;", "private java.net.InetAddress host;",
                "private int facility;"]),
        ],
    ),
    (
        "crypto",
        "edu.toycrypt.classic",
        "Cipher",
        [
            ("public String encrypt(String plain)", "Encrypts the given plain text with this cipher.", "return plain;"),
            ("public int keyLength()", "Returns the length of the key used by this cipher.", "return 0;"),
        ],
        [
            ("CaesarCipher", "Cipher", {
                "encrypt": ("Encrypts the given plain text by shifting each letter a fixed number of places.",
                            "StringBuilder sb = new StringBuilder();\nfor (char ch : plain.toCharArray()) {\n"
                            "  sb.append((char) ('a' + (ch - 'a' + shift) % 26));\n}\nreturn sb.toString();"),
                "keyLength": ("Returns the length of the key using a lookup table.", "return 1;"),
            }, ["private int shift;"]),
            ("VigenereCipher", "Cipher", {
                "encrypt": ("Encrypts the given plain text by shifting each letter by the matching keyword letter.",
                            "StringBuilder sb = new StringBuilder();\nfor (int i = 0; i < plain.length(); i++) {\n"
                            "  int k = keyword.charAt(i % keyword.length()) - 'a';\n"
                            "  sb.append((char) ('a' + (plain.charAt(i) - 'a' + k) % 26));\n}\nreturn sb.toString();"),
                "keyLength": ("Returns the length of the key and caches the result.", "return keyword.length();"),
            }, ["private String keyword;"]),
            ("XorCipher", "Cipher", {
                "encrypt": ("Encrypts the given plain text by xoring every byte with the repeating key bytes.",
                            "byte[] in = plain.getBytes();\nfor (int i = 0; i < in.length; i++) {\n"
                            "  in[i] ^= key[i % key.length];\n}\nreturn new String(in);"),
                "keyLength": ("Returns the length of the key as required by the contract.", "return key.length;"),
            }, ["private byte[] key;"]),
        ],
    ),
    (
        "http",
        "org.toyhttp.server",
        "Handler",
        [
            ("public int handle(Request request)", "Handles the given request and returns the status code.",
             "return 404;"),
            ("public String contentType()", "Returns the content type of the responses of this handler.",
             "return \"text/plain\";"),
        ],
        [
            ("StaticFileHandler", "Handler", {
                "handle": ("Handles the given request by streaming the matching file from the document root.",
                           "java.io.File f = new java.io.File(root, request.path());\n"
                           "if (!f.exists()) {\n  return 404;\n}\nrequest.send(f);\nreturn 200;"),
                "contentType": ("Returns the content type of the responses and caches the result.",
                                "return java.net.URLConnection.guessContentTypeFromName(lastPath);"),
            }, ["private java.io.File root;", "private String lastPath;"]),
            ("RedirectHandler", "Handler", {
                "handle": ("Handles the given request by answering with a permanent redirect to the target url.",
                           "request.header(\"Location\", target);\nreturn 301;"),
                "contentType": ("Returns the content type of the responses as required by the contract.",
                                "return \"text/html\";"),
            }, ["private String target;"]),
            ("HealthCheckHandler", "Handler", {
                "handle": ("Handles the given request in a thread safe way and returns the status code.",
                           "return database.ping() ? 200 : 503;"),
                "contentType": ("Returns the json content type of the health check payload.",
                                "return \"application/json\";"),
            }, ["private Database database;"]),
        ],
    ),
    (
        "games",
        "games.chess.pieces",
        "Piece",
        [
            ("public boolean canMove(int dx, int dy)",
             "Returns true if this piece may move by the given offset.", "return false;"),
            ("public char symbol()", "Returns the letter used for this piece in board notation.", "return '?';"),
        ],
        [
            ("Knight", "Piece", {
                "canMove": ("Returns true if the offset is an l shaped jump of the knight.",
                            "return Math.abs(dx * dy) == 2;"),
                "symbol": ("Returns the letter used for this piece as required by the contract.", "return 'N';"),
            }, []),
            ("Bishop", "Piece", {
                "canMove": ("Returns true if the offset moves the bishop along a diagonal.",
                            "return dx != 0 && Math.abs(dx) == Math.abs(dy);"),
                "symbol": ("Returns the letter used for this piece without allocating memory.", "return 'B';"),
            }, []),
            ("Rook", "Piece", {
                "canMove": ("Returns true if the offset moves the rook along a rank or file.",
                            "return (dx == 0) != (dy == 0);"),
                "symbol": ("Returns the letter used in board notation for the current configuration.", "return 'R';"),
            }, []),
            ("Queen", "Piece", {
                "canMove": ("Returns true if the offset moves the queen along a rank, file or diagonal.",
                            "return (dx == 0) != (dy == 0) || (dx != 0 && Math.abs(dx) == Math.abs(dy));"),
                "symbol": ("Returns the letter used in board notation using a lookup table.", "return 'Q';"),
            }, []),
        ],
    ),
]


def javadoc(text, indent):
    pad = " " * indent
    lines = [pad + "/**"]
    for line in text.split("\n"):
        for wrapped in textwrap.wrap(line, 90) or [""]:
            lines.append(pad + " * " + wrapped)
    lines.append(pad + " */")
    return "\n".join(lines)


def method(sig, body, doc, indent=2, annotation=None):
    pad = " " * indent
    out = []
    if doc is not None:
        out.append(javadoc(doc, indent))
    if annotation:
        out.append(pad + annotation)
    out.append(pad + sig + " {")
    for line in body.split("\n"):
        if line:
            out.append(pad + "  " + line)
    out.append(pad + "}")
    return "\n".join(out)


def method_name(sig):
    return sig.split("(")[0].split()[-1]


def base_file(pkg, base, methods):
    parts = [f"package {pkg};", "", "import java.util.ArrayList;", "import java.util.HashMap;",
             "import java.util.List;", "import java.util.Map;", "",
             javadoc(f"Common behaviour of every {base}.", 0),
             f"public abstract class {base} {{"]
    parts.append("  protected final Map<String, Object> map = new HashMap<>();")
    parts.append("  protected final List<String> buffer = new ArrayList<>();")
    parts.append("  protected String input = \"\";")
    parts.append("  protected int pos;")
    parts.append("  protected double balance;")
    parts.append("  protected boolean running;")
    parts.append("")
    for sig, doc, body in methods:
        parts.append(method(sig, body, doc))
        parts.append("")
    # Undocumented helper and a private method: never paired.
    parts.append(method("protected String name()", "return getClass().getSimpleName();", None))
    parts.append("")
    parts.append(method("private void log(String s)", "buffer.add(\"{\" + s + \"}\");",
                        "Internal trace; the braces in the literal must not confuse the scanner."))
    parts.append("")
    parts.append(method("public String toString()", "return name();", f"Returns the name of this {base}."))
    parts.append("}")
    return "\n".join(parts) + "\n"


def sub_file(pkg, base, name, parent, overrides, fields, base_methods, project_index, sub_index):
    parts = [f"package {pkg};", "", javadoc(f"A {parent} variant.", 0), f"public class {name} extends {parent} {{"]
    for f in fields:
        parts.append("  " + f)
    if fields:
        parts.append("")
    by_name = {method_name(sig): (sig, doc) for sig, doc, _ in base_methods}
    for mname, (doc, body) in overrides.items():
        sig, _ = by_name[mname]
        parts.append(method(sig, body or "// nothing to do", doc, annotation="@Override"))
        parts.append("")
    # Noise the miner has to skip, rotated across subclasses.
    kind = (project_index + sub_index) % 4
    if kind == 0:
        # toString overrides the project base, but its comment is a verbatim copy.
        parts.append(method("public String toString()", f"return \"{name}\";",
                            f"Returns the name of this {base}.", annotation="@Override"))
    elif kind == 1:
        # Override without documentation.
        parts.append(method("public String toString()", f"return \"{name}@\" + hashCode();", None, annotation="@Override"))
    elif kind == 2:
        # Non-ASCII main description.
        parts.append(method("public String toString()", f"return \"{name}\";",
                            f"Liefert den Namen dieser Klasse f\u00fcr {name}.", annotation="@Override"))
    else:
        # equals comes from java.lang.Object, which is not in the project.
        parts.append(method("public boolean equals(Object other)", "return other == this;",
                            "Compares by identity.", annotation="@Override"))
    parts.append("")
    parts.append("  /** Builder used by tests; nested so the scanner sees a class inside a class. */")
    parts.append("  public static final class Builder {")
    parts.append(f"    /** Builds a new {name}. */")
    parts.append(f"    public {name} build() {{")
    parts.append("      return null;")
    parts.append("    }")
    parts.append("  }")
    parts.append("}")
    return "\n".join(parts) + "\n"


def main():
    out = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).parent / "toy_corpus"
    if out.exists():
        shutil.rmtree(out)
    for pi, (project, pkg, base, methods, subs) in enumerate(PROJECTS):
        src = out / project / "src" / "main" / "java" / pkg.replace(".", "/")
        src.mkdir(parents=True)
        (src / f"{base}.java").write_text(base_file(pkg, base, methods), encoding="utf-8")
        for si, (name, parent, overrides, fields) in enumerate(subs):
            (src / f"{name}.java").write_text(
                sub_file(pkg, base, name, parent, overrides, fields, methods, pi, si), encoding="utf-8")


if __name__ == "__main__":
    main()
