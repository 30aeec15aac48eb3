# def ghost(x):
#     return x
# class Ghost:
#     pass


def visible():  # def trailing_fake(): pass
    return 1  # class TrailingGhost:
