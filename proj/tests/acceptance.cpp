int main() { return 1; }  // acceptance gate not assembled yet
