class OldStyle:
    def greet(self):
        print "hello from python 2"


def legacy(argv):
    try:
        print "args:", argv
    except ValueError, err:
        print err
    return 0
