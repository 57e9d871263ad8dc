// Placeholder demo; replaced once the library surface is in place.
int main() { return 0; }
