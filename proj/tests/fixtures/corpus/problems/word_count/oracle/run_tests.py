from harness import run

CASES = [
    ("one two three", {"one": 1, "two": 1, "three": 1}),
    ("a a a b", {"a": 3, "b": 1}),
    ("The the THE", {"the": 3}),
    ("Hello, world!", {"hello": 1, "world": 1}),
    ("", {}),
    ("!!! ...", {}),
    ("tab\tand\nnewline", {"tab": 1, "and": 1, "newline": 1}),
    ("it's fine", {"it's": 1, "fine": 1}),
    ("  spaced   out  ", {"spaced": 1, "out": 1}),
    ("(Yes) yes? YES.", {"yes": 3}),
]

run("count_words", CASES, lambda f, case: f(case[0]) == case[1])
