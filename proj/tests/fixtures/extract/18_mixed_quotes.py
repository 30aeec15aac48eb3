a = "it's a 'def trick(): pass' in disguise"
b = 'say "class C:" out loud'
c = "escaped \" quote then def nope(): pass"
d = 'another \' escape with class Nope:'


def survivor():
    return [a, b, c, d]
